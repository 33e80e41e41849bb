#pragma once

#include "relcoh/integer.hpp"
#include "relcoh/matrix.hpp"
#include "relcoh/fg_group.hpp"
#include "relcoh/smith.hpp"
#include "relcoh/sparse_elim.hpp"
#include "relcoh/abelian.hpp"
#include "relcoh/groups.hpp"
#include "relcoh/cochain.hpp"
#include "relcoh/dimlim.hpp"
#include "relcoh/toeplitz.hpp"
#include "relcoh/io.hpp"
