"""tests macromic."""
