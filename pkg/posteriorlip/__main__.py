"""Run the command line with ``python -m posteriorlip``."""

import posteriorlip.cli

raise SystemExit(posteriorlip.cli.main())
