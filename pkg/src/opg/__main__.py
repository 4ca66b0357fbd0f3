from opg.cli import main

raise SystemExit(main())
