"""curvcones CLI package."""
