import sys

from pytoricoda import main

sys.exit(main())
