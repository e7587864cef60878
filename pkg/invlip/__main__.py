import sys

from .cli import entrypoint

sys.exit(entrypoint())
