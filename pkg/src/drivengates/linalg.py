"""Dense linear algebra for small qubit registers.

Conventions used throughout the package:

* A register of ``m`` qubits lives in dimension ``2**m``.
* Qubit 0 is the most significant bit of a basis index: the basis state
  ``|b0 b1 ... b_{m-1}>`` has index ``sum(b_k * 2**(m-1-k))``.  With the
  driven qubit at position 0 and a control bitstring ``x`` on qubits
  ``1..n``, the pair ``|0,x>``, ``|1,x>`` sits at indices ``x`` and
  ``x + 2**n``.
* ``sigma_z |0> = +|0>``; ``|1>`` is the excited state.
* Operators are plain complex ndarrays.  Hamiltonians are in angular
  frequency units (hbar = 1), times in seconds.
"""

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
# Lowering operator |0><1|: maps the excited state to the ground state.
SIGMA_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
PROJ_0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
PROJ_1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


def kron(a, b):
    """Tensor product with ``a`` on the slow (most significant) index.

    ``kron(A, B)`` acts as ``A`` on the first subsystem and ``B`` on the
    second, matching the most-significant-bit-first basis ordering.
    """
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(ops):
    """Tensor product of a sequence of operators, first factor slowest."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def embed(op, site, m):
    """Embed a single-qubit operator at position ``site`` of an ``m``-qubit register.

    Parameters
    ----------
    op : (2, 2) array_like
        Single-qubit operator.
    site : int
        Qubit position, 0 (most significant) through ``m - 1``.
    m : int
        Number of qubits in the register.

    Returns
    -------
    (2**m, 2**m) ndarray
    """
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError("embed expects a single-qubit operator, got shape %s" % (op.shape,))
    if not 0 <= site < m:
        raise ValueError("site %d out of range for %d qubits" % (site, m))
    left = np.eye(2 ** site, dtype=complex)
    right = np.eye(2 ** (m - site - 1), dtype=complex)
    return np.kron(np.kron(left, op), right)


def dag(a):
    return np.conjugate(np.asarray(a)).T


def require_hermitian(h, tol=1e-12):
    """Raise ValueError unless ``h`` is hermitian within ``tol`` (relative)."""
    h = np.asarray(h)
    scale = max(1.0, np.max(np.abs(h)))
    dev = np.max(np.abs(h - dag(h)))
    if dev > tol * scale:
        raise ValueError("operator is not hermitian (max deviation %.3e, scale %.3e)" % (dev, scale))


def unitary_exp(h, t):
    """Return exp(-i h t) for hermitian ``h`` via eigendecomposition.

    Parameters
    ----------
    h : (d, d) array_like
        Hermitian operator (validated; ValueError on non-hermitian input).
    t : float
        Evolution time.

    Returns
    -------
    (d, d) ndarray
        Unitary propagator.
    """
    h = np.asarray(h, dtype=complex)
    require_hermitian(h)
    evals, vecs = np.linalg.eigh(h)
    phases = np.exp(-1j * evals * t)
    return (vecs * phases) @ dag(vecs)


def is_unitary(u, tol=1e-10):
    u = np.asarray(u)
    d = u.shape[0]
    return bool(np.max(np.abs(dag(u) @ u - np.eye(d))) <= tol)


def basis_state(dim, index):
    """Computational basis vector |index> in dimension ``dim``."""
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def bits_to_index(bits):
    """Basis index of the bitstring ``bits`` (qubit 0 first, most significant)."""
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    return index


def index_to_bits(index, m):
    """Bit tuple (qubit 0 first) of a basis index in an ``m``-qubit register."""
    return tuple((index >> (m - 1 - k)) & 1 for k in range(m))


def bit_values(m):
    """Array of shape (m, 2**m): entry [k, i] is bit k of basis index i."""
    idx = np.arange(2 ** m)
    return np.array([(idx >> (m - 1 - k)) & 1 for k in range(m)])


def subspace_indices(x, n):
    """Indices of |0,x> and |1,x> for control string ``x`` on ``n`` controls."""
    if not 0 <= x < 2 ** n:
        raise ValueError("control string %d out of range for %d controls" % (x, n))
    return x, x + 2 ** n


def block(a, indices):
    """Square sub-block of ``a`` picked out by ``indices`` (rows and columns)."""
    idx = np.asarray(indices)
    return np.asarray(a)[np.ix_(idx, idx)]


def expand_operator(op, sites, m):
    """Embed a multi-qubit operator acting on ``sites`` into an ``m``-qubit register.

    Parameters
    ----------
    op : (2**k, 2**k) array_like
        Operator on the subregister, whose qubit ``i`` is register qubit
        ``sites[i]``.
    sites : sequence of int
        Distinct register positions, one per subregister qubit.
    m : int
        Number of qubits in the register.

    Returns
    -------
    (2**m, 2**m) ndarray
    """
    sites = list(sites)
    k = len(sites)
    if len(set(sites)) != k or any(not 0 <= q < m for q in sites):
        raise ValueError("sites must be distinct positions inside the register")
    op = np.asarray(op, dtype=complex)
    if op.shape != (2 ** k, 2 ** k):
        raise ValueError("operator shape %s does not match %d sites" % (op.shape, k))
    rest = [q for q in range(m) if q not in sites]
    big = np.kron(op, np.eye(2 ** (m - k), dtype=complex))
    # ``big`` acts on qubits ordered sites + rest; permute into register order.
    order = sites + rest
    perm = [order.index(q) for q in range(m)]
    big = big.reshape((2,) * (2 * m))
    big = big.transpose(perm + [m + p for p in perm])
    return big.reshape(2 ** m, 2 ** m)


def apply_superop_on_sites(superop, sites, rho, m):
    """Apply a subregister superoperator to an ``m``-qubit operator.

    The superoperator uses row-major vectorization, ``vec(A rho B) =
    (A kron B^T) vec(rho)``, on the subregister whose qubit ``i`` is
    register qubit ``sites[i]``.

    Parameters
    ----------
    superop : (4**k, 4**k) array_like
    sites : sequence of int
    rho : (2**m, 2**m) array_like
    m : int

    Returns
    -------
    (2**m, 2**m) ndarray
    """
    sites = list(sites)
    k = len(sites)
    superop = np.asarray(superop, dtype=complex)
    if superop.shape != (4 ** k, 4 ** k):
        raise ValueError("superoperator shape %s does not match %d sites" % (superop.shape, k))
    st = superop.reshape((2,) * (4 * k))
    rt = np.asarray(rho, dtype=complex).reshape((2,) * (2 * m))
    in_axes = sites + [m + q for q in sites]
    out = np.tensordot(st, rt, axes=(list(range(2 * k, 4 * k)), in_axes))
    # tensordot leaves the superoperator's output axes first; put them back
    # at the register positions they act on.
    out = np.moveaxis(out, list(range(2 * k)), in_axes)
    return out.reshape(2 ** m, 2 ** m)


def partial_trace(rho, keep, m):
    """Partial trace of an ``m``-qubit density matrix.

    Parameters
    ----------
    rho : (2**m, 2**m) array_like
    keep : sequence of int
        Qubit positions to retain, in ascending order of significance.
    m : int
        Number of qubits.

    Returns
    -------
    (2**k, 2**k) ndarray with k = len(keep).
    """
    keep = sorted(keep)
    traced = [q for q in range(m) if q not in keep]
    rho = np.asarray(rho, dtype=complex).reshape((2,) * (2 * m))
    # Contract each traced qubit's row index with its column index.
    for q in sorted(traced, reverse=True):
        n_active = rho.ndim // 2
        rho = np.trace(rho, axis1=q, axis2=q + n_active)
    k = len(keep)
    return rho.reshape(2 ** k, 2 ** k)


def haar_state(dim, rng):
    """Haar-random pure state as a length-``dim`` vector."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def assert_density_matrix(rho, tol=1e-7):
    """Raise AssertionError unless ``rho`` is a valid density matrix within ``tol``."""
    rho = np.asarray(rho)
    herm = np.max(np.abs(rho - dag(rho)))
    if herm > tol:
        raise AssertionError("density matrix not hermitian: deviation %.3e" % herm)
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise AssertionError("density matrix trace %.6f deviates from 1" % tr.real)
    evals = np.linalg.eigvalsh((rho + dag(rho)) / 2)
    if evals.min() < -tol:
        raise AssertionError("density matrix has negative eigenvalue %.3e" % evals.min())
