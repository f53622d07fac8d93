"""tracelens: a debugging-oriented specification-mining workbench.

Ingests function-level execution traces with snapshots of monitored global
fields, abstracts them into state machines keyed by user-chosen constraint
valuations (with composite-state zoom back to the raw events), and ships
fully automated mining baselines (PTA, kTails, blue-fringe, gkTail-lite)
with comparison metrics.
"""

__version__ = "0.1.0"
