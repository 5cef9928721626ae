import sys

from bcjulia.cli import main

sys.exit(main())
