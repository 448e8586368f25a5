import sys
from .qcli.runner import main

sys.exit(main())
