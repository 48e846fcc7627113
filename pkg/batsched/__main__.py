import sys

from batsched.cli import main

sys.exit(main())
