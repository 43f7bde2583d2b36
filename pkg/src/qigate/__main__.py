import sys

from qigate.cli import main

sys.exit(main())
