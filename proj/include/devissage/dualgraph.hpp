#pragma once

#include "devissage/graph.hpp"
#include "devissage/xi.hpp"
