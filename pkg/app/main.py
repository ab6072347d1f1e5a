"""
Main application module.

This module serves as the entry point for the Chebyshev subsampling recovery API.
It configures the FastAPI application, includes all routers, and sets up middleware.
"""
import logging
from contextlib import asynccontextmanager
from logging.config import dictConfig

from fastapi import FastAPI, Request, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.config import settings
from app.create_db import init_db
from app.exceptions import GuaranteeError, RecoveryError
from app.logconf import DEFAULT_LOGGER, log_config
from app.routers import routers
from app.schemas.base import ErrorResponse

dictConfig(log_config)
logger = logging.getLogger(DEFAULT_LOGGER)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Create the results tables when the application starts.
    """
    init_db()
    yield


# Create the FastAPI application
app = FastAPI(
    title=settings.APP_NAME,
    description="Least-squares recovery on hyperbolic crosses from subsampled random Chebyshev nodes",
    version=settings.API_VERSION,
    lifespan=lifespan,
)

# Configure CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include all routers
for router in routers:
    app.include_router(router, prefix="/api")


# Root endpoint
@app.get("/")
def root():
    """
    Root endpoint that returns API information.
    """
    return {
        "name": settings.APP_NAME,
        "version": settings.API_VERSION,
        "documentation": "/docs",
    }


@app.exception_handler(RecoveryError)
async def recovery_exception_handler(request: Request, exc: RecoveryError):
    """
    Map numerical failures (bad parameters, singular systems, violated
    guarantees) to 400 responses.
    """
    details = {key: value for key, value in vars(exc).items() if isinstance(value, (int, float, str))}
    if isinstance(exc, GuaranteeError):
        logger.error("%s %s: %s", request.method, request.url.path, exc)
    else:
        logger.info("%s %s rejected: %s", request.method, request.url.path, exc)
    return JSONResponse(
        status_code=status.HTTP_400_BAD_REQUEST,
        content=ErrorResponse(message=str(exc), error_code=type(exc).__name__, details=details or None).model_dump(),
    )


# Global exception handler
@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """
    Global exception handler to provide consistent error responses.
    """
    logger.exception("Unhandled error on %s %s", request.method, request.url.path)
    return JSONResponse(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        content={"detail": "An internal server error occurred."},
    )


# Run the application
if __name__ == "__main__":
    import uvicorn
    uvicorn.run("app.main:app", host="0.0.0.0", port=8000, reload=settings.DEBUG)
