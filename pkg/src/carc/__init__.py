"""Circular-arc graph models: normalization, PQSM-trees, enumeration and canonization."""
