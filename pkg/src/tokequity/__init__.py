"""Tokenization-premium measurement toolkit.

Measures how unevenly byte-level BPE tokenizers split languages, fuses the
result with speaker and economic indicators, estimates the population and
compute cost of the gap, and evaluates round-trip translation quality with
an LLM judge. The `tokequity` CLI drives the full pipeline.
"""

__version__ = "0.1.0"
