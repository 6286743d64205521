"""Goal-dependent type analysis for a subset of Prolog."""
