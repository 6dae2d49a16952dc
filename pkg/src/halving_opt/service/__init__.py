"""HTTP service over the solver package.

`schemas` holds the pydantic request/response models, `api` the pure entry
points, `app` the FastAPI wiring. `app` is not imported here so that callers
who only need the in-process entry points skip the web dependencies.
"""
