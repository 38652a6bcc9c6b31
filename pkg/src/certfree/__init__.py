"""Mutually compatible identity-based and certificateless encryption,
signatures and key exchange over a prime-order elliptic-curve group."""

from .authority import (Domain, MasterPublicKey, MasterSecretKey, PartialKey,
                        SystemParams, extract, part_key_gen, security_level,
                        setup)
from .group import get_group, op_counter_wrap
from .schemes import (Ciphertext, KexEphemeral, KexMessage, SessionKey,
                      Signature, decrypt, encrypt, kex_finalize, kex_init,
                      kex_message, sign, verify)
from .users import (UserCredential, UserSecret, derive_public_point,
                    idb_credential, user_key_gen, user_setup,
                    verify_credential)

__version__ = "0.1.0"

__all__ = [
    "Ciphertext", "Domain", "KexEphemeral", "KexMessage", "MasterPublicKey",
    "MasterSecretKey", "PartialKey", "SessionKey", "Signature", "SystemParams",
    "UserCredential", "UserSecret", "decrypt", "derive_public_point",
    "encrypt", "extract", "get_group", "idb_credential", "kex_finalize",
    "kex_init", "kex_message", "op_counter_wrap", "part_key_gen",
    "security_level", "setup", "sign", "user_key_gen", "user_setup",
    "verify", "verify_credential",
]
