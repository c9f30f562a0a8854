# Core modules: settings, errors, logging, campaign context
