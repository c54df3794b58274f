"""Campaign management (shift and support bribery) under approval-driven rules."""
