import sys

from planar_dipoles.cli import main

sys.exit(main())
