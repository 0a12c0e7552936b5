"""Web log hit counting with an in-process MapReduce runtime, a Pig Latin
subset interpreter for aggregating the results, and SVG charts."""

__version__ = "0.1.0"
