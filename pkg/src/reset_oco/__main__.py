import sys

from reset_oco.harness.cli import main

sys.exit(main())
