"""Standard skeleta of 3-manifolds with marked boundary and their move calculus."""

__version__ = "0.1.0"
