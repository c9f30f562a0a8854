# Full-rank lines: exact linear algebra, witness search and verification campaigns
