import sys

from shockstab.cli_harness import main

sys.exit(main())
