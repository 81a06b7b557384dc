# Utils package initialization
"""
Utilities Module
================
Shared utilities including:
- Logging configuration
- Error hierarchy
- Validation helpers
- Atom grouping
"""
