"""mathdef: build definition-classification datasets from mathematical text.

The pipeline goes raw corpus files -> cleaned text -> sentences -> labeled
datasets -> trained classifier -> evaluation tables.  Each stage reads and
writes JSONL so stages can be run, inspected, and diffed independently (see
the ``mathdef`` command line tool).
"""

__version__ = "0.1.0"
