import sys

from qhflow.main import main

sys.exit(main())
