#ifndef HECKE_HECKE_HPP
#define HECKE_HECKE_HPP

#include "hecke/closure.hpp"
#include "hecke/coset.hpp"
#include "hecke/graph.hpp"
#include "hecke/group.hpp"
#include "hecke/gset.hpp"
#include "hecke/metric.hpp"
#include "hecke/verifier.hpp"

#endif  // HECKE_HECKE_HPP
