# Service layer - correlation, tree, bootstrap and export logic
