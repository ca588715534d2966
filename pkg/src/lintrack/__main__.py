import sys

from lintrack.cli import main

sys.exit(main())
