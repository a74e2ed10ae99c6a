import sys

from goppa_bounds.main import main

sys.exit(main())
