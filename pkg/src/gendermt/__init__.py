"""Gender-bias evaluation for machine translation systems.

The toolkit runs a three-stage protocol over a balanced challenge corpus:
translate the English sentences with a pluggable MT backend, word-align the
resulting bitext, and read the grammatical gender of each entity's translation
off language-specific morphology.  Reports cover overall gender accuracy and
the male/female and stereotype performance gaps.
"""

__version__ = "0.1.0"
