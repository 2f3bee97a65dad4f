#pragma once

#include "entropy.hpp"
#include "families.hpp"
#include "format.hpp"
#include "histories.hpp"
#include "oracle.hpp"
#include "tree.hpp"
#include "verify.hpp"
#include "xml.hpp"
