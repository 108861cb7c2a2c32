"""kg2t: a workbench for generating and evaluating text from person knowledge graphs."""

__version__ = "0.1.0"
