import sys

from csiszar.cli import main

sys.exit(main())
