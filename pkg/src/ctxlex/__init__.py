"""Contextual sentiment lexicon construction."""
