import sys

from vhcert.cli import main

sys.exit(main())
