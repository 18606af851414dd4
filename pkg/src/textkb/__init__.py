"""textkb: skim encyclopedic text into a concept network and ask it questions.

The package reads plain-text articles, keeps the sentences that touch a
topic, parses and interprets them against a small verb/noun semantics, and
stores the result as concepts and relation instances in a long-term memory
that can be dumped, reloaded, checked, and queried.
"""

__version__ = "0.1.0"
