from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.middleware.gzip import GZipMiddleware
from datetime import datetime
import logging

from api.hardy import router as hardy_router
from api.polytope import router as polytope_router
from api.states import router as states_router
from api.symmetric import router as symmetric_router
from config.settings import settings

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

app = FastAPI(
    title="Nonlocality Service",
    description="Hardy-type tests of genuine multipartite nonlocality",
    version=settings.VERSION,
)

# Vertex tables and LP certificates compress well
app.add_middleware(GZipMiddleware, minimum_size=1000)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include API routers
app.include_router(states_router, prefix="/api/states", tags=["states"])
app.include_router(hardy_router, prefix="/api/hardy", tags=["hardy"])
app.include_router(symmetric_router, prefix="/api/symmetric", tags=["symmetric"])
app.include_router(polytope_router, prefix="/api/polytope", tags=["polytope"])


# Health check endpoint
@app.get("/health")
async def health_check():
    return {"status": "healthy", "timestamp": datetime.utcnow(), "version": settings.VERSION}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        app,
        host=settings.HOST,
        port=settings.PORT,
        log_level=settings.LOG_LEVEL.lower(),
        reload=settings.DEBUG,
    )
