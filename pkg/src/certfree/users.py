"""User-side key material.

Both domains end up with the same kind of credential: a scalar x and a
public point Q satisfying x*P = Y + Q, where Y is derived from the identity,
Q and the master public key.  Nothing downstream looks at the domain tag.
"""

from __future__ import annotations

from dataclasses import dataclass

from .authority import (Domain, MasterPublicKey, PartialKey, SystemParams,
                        as_identity)
from .errors import BindingCheckError, ValidationError
from .group import Rng


@dataclass(frozen=True)
class UserSecret:
    alpha: int
    U: object

    def __repr__(self):
        return f"UserSecret(U={self.U!r}, <secret>)"


@dataclass(frozen=True)
class UserCredential:
    params: SystemParams
    identity: bytes
    Q: object
    x: int
    domain: Domain

    def __repr__(self):
        return (f"UserCredential(identity={self.identity!r}, "
                f"domain={self.domain.name}, <secret>)")

    def with_params(self, params: SystemParams) -> "UserCredential":
        return UserCredential(params, self.identity, self.Q, self.x, self.domain)


def user_setup(params: SystemParams, rng: Rng) -> UserSecret:
    alpha = params.group.scalar_random(rng)
    return UserSecret(alpha, params.group.base_mul(alpha))


def derive_public_point(identity, Q, mpk: MasterPublicKey):
    """Y = sum of the k master commitments H1(identity, Q) selects."""
    return mpk.public_point(as_identity(identity), Q)


def idb_credential(identity, partial: PartialKey, mpk: MasterPublicKey) -> UserCredential:
    """Wrap an extracted IDB key; the user has nothing to add to it."""
    if partial.domain is not Domain.IDB:
        raise ValidationError("expected an IDB key from extract()")
    return UserCredential(mpk.params, as_identity(identity), partial.Q,
                          partial.scalar, Domain.IDB)


def user_key_gen(identity, user_secret: UserSecret, partial: PartialKey,
                 mpk: MasterPublicKey) -> UserCredential:
    """Finish a CL key: x = w + alpha, after checking Q - U == w*P - Y.

    Raises BindingCheckError when the partial key was not issued for this
    user's U, which is also what a replaced public key looks like.
    """
    if partial.domain is not Domain.CL:
        raise ValidationError("user_key_gen needs a CL partial key")
    identity = as_identity(identity)
    group = mpk.params.group
    Y = mpk.public_point(identity, partial.Q)
    w_prime = group.sub(partial.Q, user_secret.U)
    w_second = group.sub(group.base_mul(partial.scalar), Y)
    if w_prime != w_second:
        raise BindingCheckError("binding check failed")
    x = (partial.scalar + user_secret.alpha) % group.order
    return UserCredential(mpk.params, identity, partial.Q, x, Domain.CL)


def verify_credential(cred: UserCredential, mpk: MasterPublicKey) -> bool:
    group = mpk.params.group
    try:
        return group.base_mul(cred.x) == mpk.key_point(cred.identity, cred.Q)
    except ValueError:
        return False
