"""Nowhere-zero flows on signed graphs."""
