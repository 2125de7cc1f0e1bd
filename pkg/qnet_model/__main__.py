from qnet_model.cli import main

raise SystemExit(main())
