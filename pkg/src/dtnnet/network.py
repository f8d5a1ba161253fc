"""Resistor network of a packing: build, Kirchhoff solve, DtN matrix.

Nodes are the inclusion centers plus one boundary node per boundary
inclusion. Each boundary node has degree one. The edge conductivities
follow the square-root gap law; the discrete energy is

    E(psi) = min_U  sum_i (sigma_i/2)(U_i - Psi_i)^2
                  + sum_{gap edges} (sigma_ij/2)(U_i - U_j)^2 .
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.csgraph

from .errors import FloatingComponentError, ModeError, SingularSystemError
from .geometry import GeometryAnalysis


@dataclass(frozen=True)
class Network:
    interior_nodes: np.ndarray  # (N, 2) inclusion centers
    boundary_nodes: np.ndarray  # (N_b, 2) points on the outer circle
    boundary_count: int
    gap_edges: tuple[tuple[int, int], ...]  # unordered pairs, stored once, i < j
    gap_sigmas: np.ndarray  # conductivity per gap edge
    boundary_sigmas: np.ndarray  # conductivity of edge (boundary node i, inclusion i)
    boundary_angles: np.ndarray

    @property
    def n(self) -> int:
        return self.interior_nodes.shape[0]


@dataclass(frozen=True)
class KirchhoffSolution:
    U: np.ndarray  # inclusion potentials
    energy: float
    residual_norm: float


def build_network(analysis: GeometryAnalysis, mode: str = "identical") -> Network:
    """Edge conductivities from the gap widths.

    identical:    sigma_ij = pi sqrt(R/delta_ij),  sigma_i = pi sqrt(2R/delta_i)
    generalized:  sigma_ij = pi sqrt(2 R_i R_j / (delta_ij (R_i + R_j))),
                  sigma_i  = pi sqrt(2 R_i / delta_i)
    """
    if mode not in ("identical", "generalized"):
        raise ModeError(f"unknown mode {mode!r}")
    radii = analysis.packing.radii()
    if mode == "identical":
        spread = radii.max() - radii.min()
        if spread > 1e-12 * radii.max():
            raise ModeError("identical mode requires equal radii")
    edges = sorted(analysis.gap_widths)
    sigmas = np.empty(len(edges))
    for e, (i, j) in enumerate(edges):
        delta = analysis.gap_widths[(i, j)]
        if mode == "identical":
            sigmas[e] = math.pi * math.sqrt(radii[i] / delta)
        else:
            sigmas[e] = math.pi * math.sqrt(
                2.0 * radii[i] * radii[j] / (delta * (radii[i] + radii[j]))
            )
    n_b = analysis.boundary_count
    # Both modes share the boundary law; identical radii make them coincide.
    b_sigmas = math.pi * np.sqrt(2.0 * radii[:n_b] / analysis.boundary_gaps)
    return Network(
        interior_nodes=analysis.packing.centers(),
        boundary_nodes=analysis.boundary_nodes,
        boundary_count=n_b,
        gap_edges=tuple(edges),
        gap_sigmas=sigmas,
        boundary_sigmas=b_sigmas,
        boundary_angles=analysis.boundary_angles,
    )


def _component_labels(network: Network) -> np.ndarray:
    n = network.n
    if network.gap_edges:
        rows = [i for i, _ in network.gap_edges]
        cols = [j for _, j in network.gap_edges]
        adj = scipy.sparse.coo_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(n, n)
        )
    else:
        adj = scipy.sparse.coo_matrix((n, n))
    _, labels = scipy.sparse.csgraph.connected_components(adj, directed=False)
    return labels


def check_connected(network: Network) -> None:
    """Every inclusion component must reach a boundary edge."""
    labels = _component_labels(network)
    grounded = set(labels[: network.boundary_count])
    if set(labels) - grounded:
        raise SingularSystemError(
            "network has inclusion components with no path to a boundary node"
        )


def _assemble(network: Network) -> tuple[np.ndarray, np.ndarray]:
    """Reduced system over inclusion potentials and the boundary coupling."""
    n = network.n
    A = np.zeros((n, n))
    for (i, j), s in zip(network.gap_edges, network.gap_sigmas):
        A[i, i] += s
        A[j, j] += s
        A[i, j] -= s
        A[j, i] -= s
    diag_b = np.zeros(n)
    diag_b[: network.boundary_count] = network.boundary_sigmas
    A[np.diag_indices(n)] += diag_b
    return A, diag_b


def solve_kirchhoff(network: Network, psi: np.ndarray) -> KirchhoffSolution:
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (network.boundary_count,):
        raise ValueError(
            f"psi must have length {network.boundary_count}, got shape {psi.shape}"
        )
    check_connected(network)
    A, _ = _assemble(network)
    b = np.zeros(network.n)
    b[: network.boundary_count] = network.boundary_sigmas * psi
    cho = scipy.linalg.cho_factor(A)
    U = scipy.linalg.cho_solve(cho, b)
    residual = float(np.linalg.norm(A @ U - b))
    energy = net_energy_at(network, psi, U)
    return KirchhoffSolution(U=U, energy=energy, residual_norm=residual)


def net_energy_at(network: Network, psi: np.ndarray, U: np.ndarray) -> float:
    """Discrete energy at given inclusion potentials (no minimization)."""
    e = 0.5 * float(
        np.sum(network.boundary_sigmas * (U[: network.boundary_count] - psi) ** 2)
    )
    for (i, j), s in zip(network.gap_edges, network.gap_sigmas):
        e += 0.5 * s * (U[i] - U[j]) ** 2
    return e


def net_energy(network: Network, psi: np.ndarray) -> float:
    return solve_kirchhoff(network, psi).energy


def dtn_matrix(network: Network) -> np.ndarray:
    """Schur complement of the full network Laplacian onto the boundary nodes."""
    check_connected(network)
    A, _ = _assemble(network)
    n_b = network.boundary_count
    # Coupling block: boundary node i connects only to inclusion i.
    C = np.zeros((n_b, network.n))
    C[np.arange(n_b), np.arange(n_b)] = network.boundary_sigmas
    cho = scipy.linalg.cho_factor(A)
    X = scipy.linalg.cho_solve(cho, C.T)
    return np.diag(network.boundary_sigmas) - C @ X


def interior_gap_energy(network: Network, U_gamma: np.ndarray) -> float:
    """Minimum gap-edge energy with the boundary-inclusion potentials fixed."""
    U_gamma = np.asarray(U_gamma, dtype=float)
    n_b = network.boundary_count
    if U_gamma.shape != (n_b,):
        raise ValueError(f"U_gamma must have length {n_b}, got shape {U_gamma.shape}")
    n = network.n
    n_int = n - n_b
    if n_int == 0:
        e = 0.0
        for (i, j), s in zip(network.gap_edges, network.gap_sigmas):
            e += 0.5 * s * (U_gamma[i] - U_gamma[j]) ** 2
        return e
    labels = _component_labels(network)
    fixed = set(labels[:n_b])
    if set(labels[n_b:]) - fixed:
        raise FloatingComponentError(
            "interior inclusions with no gap path to a boundary inclusion"
        )
    Lg = np.zeros((n, n))
    for (i, j), s in zip(network.gap_edges, network.gap_sigmas):
        Lg[i, i] += s
        Lg[j, j] += s
        Lg[i, j] -= s
        Lg[j, i] -= s
    A_ii = Lg[n_b:, n_b:]
    A_ib = Lg[n_b:, :n_b]
    U_int = scipy.linalg.solve(A_ii, -A_ib @ U_gamma, assume_a="pos")
    U = np.concatenate([U_gamma, U_int])
    return 0.5 * float(U @ (Lg @ U))


def network_to_dict(network: Network) -> dict:
    return {
        "nodes": [[float(x), float(y)] for x, y in network.interior_nodes],
        "edges": [
            {"i": int(i), "j": int(j), "sigma": float(s)}
            for (i, j), s in zip(network.gap_edges, network.gap_sigmas)
        ],
        "boundary_edges": [
            {"i": int(i), "sigma": float(s), "theta": float(t)}
            for i, (s, t) in enumerate(
                zip(network.boundary_sigmas, network.boundary_angles)
            )
        ],
    }
