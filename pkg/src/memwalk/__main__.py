import sys

from memwalk.cli import main

sys.exit(main())
