#pragma once

#include "devissage/complex.hpp"
#include "devissage/errors.hpp"
#include "devissage/integer.hpp"
#include "devissage/lmap.hpp"
#include "devissage/lmodule.hpp"
#include "devissage/matrix.hpp"
#include "devissage/smith.hpp"

// dual(LModule) and dual(CoLGroup) live with the group type.
#include "devissage/colgroup.hpp"
