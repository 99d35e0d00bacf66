#include <helmlab/estimlab.hpp>

#include <map>

namespace helmlab::est
{

// sup_Q over golden_grid(spec, 0) and the named sub-grids, frozen from a reference run.
std::optional<double> golden_value(const std::string &id)
{
  static const std::map<std::string, double> table{
      {"neumann-real", 12.672573376529925},
      {"dirichlet-real", 3.9415403343409636},
      {"neumann-complex-r", 44.865215751972094},
      {"neumann-complex-weighted", 43.197021221788759},
      {"dirichlet-complex-r", 19.795606136224581},
      {"source-neumann-real", 7.2426406871192892},
      {"source-neumann-complex", 54.238804971335242},
      {"source-neumann-h12-real", 1.0000000000000009},
      {"source-neumann-h12-complex", 8.9016198249239249},
      {"veryweak-neumann-real", 5.1142303789536099},
      {"veryweak-neumann-complex", 27.103391162206105},
      {"veryweak-neumann-Hs", 5.8978619484750148},
      {"veryweak-neumann-Hs-complex", 32.571154266922072},
      {"source-dirichlet-real", 2.9837897044305426},
      {"source-dirichlet-complex", 16.093217249395838},
      {"source-dirichlet-weighted", 2.8031262173052442},
      {"source-dirichlet-weighted-normal", 0.40022229444476692},
      {"source-dirichlet-weighted-complex", 26.511295000787864},
      {"source-dirichlet-weighted-normal-complex", 1.0456652115765337},
      {"veryweak-dirichlet", 9.5228121495826841},
      {"laplace-dirichlet-s12", 1.542029263582517},
      {"laplace-dirichlet-s1", 0.99999906483614265},
      {"laplace-dirichlet-s32", 2.3892746372132452},
      {"laplace-neumann-s12", 1.8738678443682906},
      {"laplace-neumann-s1", 1.3295739742362476},
      {"laplace-neumann-s32", 2.6706343792392588},
      {"steklov-bounded", 0.99987795203469509},
      {"halfspace-neumann-l2", 0.70706362939791223},
      {"halfspace-neumann-grad", 0.72651235118631685},
      {"halfspace-neumann-trace", 1.4140382280222139},
      {"halfspace-dirichlet-l2", 0.70709239649621936},
      {"halfspace-dirichlet-normal", 0.98231752405931683},
      {"dirichlet-real|modes", 3.9415403343409636},
      {"neumann-complex-r|edge", 44.865215751972094},
  };
  auto it = table.find(id);
  if (it == table.end())
    return std::nullopt;
  return it->second;
}

}  // namespace helmlab::est
