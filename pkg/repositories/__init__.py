# Repository layer - CSV ingestion and artifact persistence
