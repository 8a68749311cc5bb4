import sys

from chordscope.cli import main

sys.exit(main())
