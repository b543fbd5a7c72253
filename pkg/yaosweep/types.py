from __future__ import annotations

import numpy as np
from jaxtyping import Bool, Float, Integer

Coordinates = Float[np.ndarray, " dim"]
PointArray = Float[np.ndarray, "point dim"]
TransformedArray = Float[np.ndarray, "point dim"]
SweepKeys = Float[np.ndarray, " point"]
IndexArray = Integer[np.ndarray, " point"]
LiveMask = Bool[np.ndarray, " point"]

SignArray = Integer[np.ndarray, " dim"]
ConeMatrix = Float[np.ndarray, "dim dim"]
GeneratorMatrix = Float[np.ndarray, "generator dim"]
ConeMatrixStack = Float[np.ndarray, "cone dim dim"]
GeneratorStack = Float[np.ndarray, "cone generator dim"]

DirectionArray = Float[np.ndarray, "sample dim"]
EdgeArray = Integer[np.ndarray, "edge 2"]
