import sys

from kelvin.cli import main

sys.exit(main())
