from bianchi.cli.main import main

raise SystemExit(main())
