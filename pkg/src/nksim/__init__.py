"""n k-similar / k-diverse solutions for ground answer-set programs."""
