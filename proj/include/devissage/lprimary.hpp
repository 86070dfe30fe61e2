#pragma once

#include "devissage/colgroup.hpp"
#include "devissage/exactlin.hpp"
#include "devissage/frob.hpp"
