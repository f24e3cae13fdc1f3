"""Python bindings for the saddlekit solvers."""

try:
    from ._saddlekit import *  # noqa: F401,F403
    from ._saddlekit import Error, InvalidInputError  # noqa: F401
except ImportError:
    # In-tree build: the extension sits next to, not inside, the package.
    from _saddlekit import *  # noqa: F401,F403
    from _saddlekit import Error, InvalidInputError  # noqa: F401
