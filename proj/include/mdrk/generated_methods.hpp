#pragma once

// Tableaus produced by the optimizer (see recipes/generate_methods.sh).
// Coefficients are stored row-major with 17 significant digits.

#include <string>
#include <vector>

namespace mdrk::generated {

struct GeneratedMethod {
  std::string name;
  std::string variant;
  double k;
  int order;
  double cts;
  std::vector<double> A;
  std::vector<double> Ahat;
  std::vector<double> b;
  std::vector<double> bhat;
};

inline const std::vector<GeneratedMethod>& methods() {
  static const std::vector<GeneratedMethod> list{
      {"M2(2,3,1)", "M2", 1, 3, 1.4999999996516635,
       {0, 0, 0.66666666682188602, 0},
       {0, 0, 0.22222222232471434, 0},
       {0.6249999999969843, 0.3750000000030464},
       {0.12500000002958059, 0.12499999991101814}},
      {"M2(3,4,1)", "M2", 1, 4, 1.8788835629256937,
       {0, 0, 0, 0.53223095871029913, 0, 0, 0.45738597970771599, 0.20790271752341424, 0},
       {0, 0, 0, 0.1416348967046549, 0, 0, 0.055326131332908521, 0.055326131332981622, 0},
       {0.47960694131364223, 0.14617782603530624, 0.37421523265099393},
       {0.070541353898913778, 0.03890018190339907, 0.063796935090293355}},
      {"M2(4,4,1)", "M2", 1, 4, 2.6668895168131712,
       {0, 0, 0, 0, 0.37496866431708858, 0, 0, 0, 0.37270356011884642, 0.31894678555141343, 0,
           0, 0.37416594019900062, 0.2037227405156298, 0.1328841254226644, 0},
       {0, 0, 0, 0, 0.070300749609870705, 0, 0, 0, 0.059797525083221226, 0.059797525083221198,
           0, 0, 0.038194821951081266, 0.021191482327184846, 0.024913691509340495, 0},
       {0.37437090117977034, 0.24744726766546279, 0.098954584673059176, 0.27922724648177361},
       {0.046392485722716266, 0.033730638659332852, 0.018552434221454625,
           0.041630363724007149}},
      {"M2(5,4,1)", "M2", 1, 4, 3.5381315284921584,
       {0, 0, 0, 0, 0, 0.26880602961986455, 0, 0, 0, 0, 0.26398926201238454,
           0.20071930452222397, 0, 0, 0, 0.26598512008455794, 0.17923417840081646,
           0.25238160939448201, 0, 0, 0.26758044858153657, 0.23771119206283109,
           0.10965049074603378, 0.1227944959362975, 0},
       {0, 0, 0, 0, 0, 0.036128340779907446, 0, 0, 0, 0, 0.02565731072780918,
           0.028365155860767672, 0, 0, 0, 0.022910935344358792, 0.025328930555929993,
           0.029620523647699043, 0, 0, 0.030385866136551361, 0.011004485121532246,
           0.012869023863969809, 0.017353014571111314, 0},
       {0.26223821491032939, 0.23296529698345295, 0.10746132278988051, 0.12034290840698694,
           0.27699225690940837},
       {0.029779213452979011, 0.01078478098671154, 0.012612094282731301, 0.017006562282724107,
           0.028958019632010629}},
      {"M3(4,4,1)", "M3", 1, 4, 1.8181818170141923,
       {0, 0, 0, 0, 0.5500000003537554, 0, 0, 0, 0.41250000026543587, 0.41249999880969529, 0,
           0, 0.4087585033157749, 0.14471574333464973, 0.19295432512709279, 0},
       {0, 0, 0, 0, 0.1512500001945655, 0, 0, 0, 0.11343749974564321, 0, 0, 0,
           0.039796829446319348, 0, 0, 0},
       {0.3855359531179694, 0.1001753065929159, 0.13356707592854911, 0.38072166436054239},
       {0.050529215647485734, 0, 0, 0}},
      {"M3(5,4,1)", "M3", 1, 4, 2.4406856762379903,
       {0, 0, 0, 0, 0, 0.409720927908306, 0, 0, 0, 0, 0.30729069593131614,
           0.30729069593131703, 0, 0, 0, 0.29287071870828468, 0.19493316962019389,
           0.25991089282685187, 0, 0, 0.34486488481480027, 0.10264025618707834,
           0.13685367491606532, 0.21573476226572039, 0},
       {0, 0, 0, 0, 0, 0.083935619383021645, 0, 0, 0, 0, 0.062951714537283932, 0, 0, 0, 0,
           0.03993409956844645, 0, 0, 0, 0, 0.032605213353347075, 0, 0, 0, 0},
       {0.36187256870733997, 0.075724136503535142, 0.10096551505399887, 0.15916102655313846,
           0.30227675318208347},
       {0.04606596856139035, 0, 0, 0, 0}},
  };
  return list;
}

}  // namespace mdrk::generated
