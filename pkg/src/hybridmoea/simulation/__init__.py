"""Job expansion, budgeted runs, chunked persistence and metric caching."""
