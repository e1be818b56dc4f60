from .backends import ElmoBackend, HashBackend, apply_layer_policy
from .export import export_corpus_stream
from .protocol import handle_line, serve_http, serve_stdio

__all__ = [
    "ElmoBackend", "HashBackend", "apply_layer_policy",
    "export_corpus_stream", "handle_line", "serve_http", "serve_stdio",
]

__version__ = "0.1.0"
