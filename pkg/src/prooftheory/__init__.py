"""Proof normalization toolkit: ordinal notations, stratified calculus and cut elimination."""
