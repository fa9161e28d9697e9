from floquet_kdvbf.cli import main
import sys

sys.exit(main())
