import sys

from .hullctl import main

sys.exit(main())
