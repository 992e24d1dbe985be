import sys

from centering.cli import main

sys.exit(main())
