import sys

from conpat.cli import main

sys.exit(main())
