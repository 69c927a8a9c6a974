"""Analysis service: HTTP front-end, ingest, jobs and the capture index."""
