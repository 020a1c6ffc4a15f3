import sys

from swiptrelay.cli import main

sys.exit(main())
