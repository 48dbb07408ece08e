import sys

from bohmlib.cli import main

sys.exit(main())
