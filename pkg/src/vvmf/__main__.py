"""Module entry point: python -m vvmf ..."""

import sys

from .cli import main

sys.exit(main())
