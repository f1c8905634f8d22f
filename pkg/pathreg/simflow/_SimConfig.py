from pathreg.report.json_io import pretty_json

SCHEMES = ["exact-increments"]


class SimConfig:
    """Monte Carlo simulation settings

    .. rubric:: Constructor

    Parameters
    ----------
    n_steps: int
        Number of time steps on ``[0, T]``, at least 2.
    n_paths: int
        Number of sample paths.
    T: float = 1.0
        Horizon.
    seed: int = 0
        Base seed, a 64-bit unsigned integer. Path ``i`` draws from
        ``np.random.default_rng([seed, i])``.
    scheme: str = "exact-increments"
        Brownian increment scheme.
    n_workers: int = 1
        Number of threads used to simulate path blocks.
    block_size: int = 1024
        Number of paths per block.
    """

    def __init__(
        self,
        n_steps: int,
        n_paths: int,
        T: float = 1.0,
        seed: int = 0,
        scheme: str = "exact-increments",
        n_workers: int = 1,
        block_size: int = 1024,
    ):
        if int(n_steps) != n_steps or n_steps < 2:
            raise ValueError(f"Error in SimConfig: n_steps={n_steps} < 2")
        if int(n_paths) != n_paths or n_paths < 1:
            raise ValueError(f"Error in SimConfig: n_paths={n_paths} < 1")
        if not T > 0.0:
            raise ValueError(f"Error in SimConfig: T={T} <= 0")
        if int(seed) != seed or not (0 <= seed < 2**64):
            raise ValueError(f"Error in SimConfig: seed={seed} is not a uint64")
        if scheme not in SCHEMES:
            raise ValueError(
                f"Error in SimConfig: scheme={scheme!r}, expected one of {SCHEMES}"
            )
        if n_workers < 1 or block_size < 1:
            raise ValueError(
                "Error in SimConfig: n_workers and block_size must be >= 1"
            )

        self.n_steps = int(n_steps)
        """int: Number of time steps"""

        self.n_paths = int(n_paths)
        """int: Number of sample paths"""

        self.T = float(T)
        """float: Horizon"""

        self.seed = int(seed)
        """int: Base seed"""

        self.scheme = scheme
        """str: Brownian increment scheme"""

        self.n_workers = int(n_workers)
        """int: Number of worker threads"""

        self.block_size = int(block_size)
        """int: Number of paths per block"""

    @property
    def dt(self) -> float:
        return self.T / self.n_steps

    def replace(self, **kwargs):
        """Return a copy with some settings changed"""
        data = self.to_dict()
        data.update(kwargs)
        return SimConfig.from_dict(data)

    @staticmethod
    def from_dict(data: dict):
        return SimConfig(
            n_steps=data["n_steps"],
            n_paths=data["n_paths"],
            T=data.get("T", 1.0),
            seed=data.get("seed", 0),
            scheme=data.get("scheme", "exact-increments"),
            n_workers=data.get("n_workers", 1),
            block_size=data.get("block_size", 1024),
        )

    def to_dict(self):
        return {
            "n_steps": self.n_steps,
            "n_paths": self.n_paths,
            "T": self.T,
            "seed": self.seed,
            "scheme": self.scheme,
            "n_workers": self.n_workers,
            "block_size": self.block_size,
        }

    def __repr__(self):
        return pretty_json(self.to_dict())
