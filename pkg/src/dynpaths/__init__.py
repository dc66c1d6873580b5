"""Incremental maintenance of graph path queries."""
