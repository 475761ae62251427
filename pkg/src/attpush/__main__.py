import sys

from attpush.cli import main

sys.exit(main())
