import sys

from rctdesign.cli import main

sys.exit(main())
