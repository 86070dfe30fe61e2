#pragma once

#include "devissage/charpoly.hpp"
#include "devissage/cohomology.hpp"
#include "devissage/lprimary.hpp"
#include "devissage/vanishing.hpp"
