"""Domain-restricted distributional co-occurrence matrices.

Build sparse word spaces whose columns are confined to one semantic field,
query them (vectors, similarities, neighbors), compose per-word concept
tensors for similarity-network classification, and attribute discrete
semantic features through prototype similarity.
"""

__version__ = "0.1.0"
