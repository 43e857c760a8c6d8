"""Corpus ingestion, verb-argument extraction, coverage, clustering and hierarchy inference."""
