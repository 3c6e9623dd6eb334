import sys

from quatks.cli import main

sys.exit(main())
