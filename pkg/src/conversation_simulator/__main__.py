"""Allow `python -m conversation_simulator`."""

import sys

from .cli import main

sys.exit(main())
