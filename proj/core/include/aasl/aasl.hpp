#pragma once

#include "aasl/adversary_lab.hpp"
#include "aasl/authenticator.hpp"
#include "aasl/bytes.hpp"
#include "aasl/hash.hpp"
#include "aasl/log.hpp"
#include "aasl/outcome.hpp"
#include "aasl/proof.hpp"
#include "aasl/skiplist_math.hpp"
#include "aasl/storage.hpp"
#include "aasl/verifier.hpp"
