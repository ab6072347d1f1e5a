"""
Router registry.

This module imports and exports all API routers for easy inclusion in the main application.
"""

from app.routers.index_sets import router as index_sets_router
from app.routers.nodes import router as nodes_router
from app.routers.coefficients import router as coefficients_router
from app.routers.experiments import router as experiments_router

routers = [
    index_sets_router,
    nodes_router,
    coefficients_router,
    experiments_router,
]
