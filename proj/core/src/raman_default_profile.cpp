// Generated by tools/scripts/gen_raman_profile.py; do not edit.
#include "dpsqkd/raman.hpp"

#include <array>

namespace dpsqkd {

namespace {
constexpr std::array<double, 401> kSilica300K = {
    4.251157187e-07, 4.521897472e-07, 4.811526382e-07, 5.121556048e-07,
    5.453646788e-07, 5.809626091e-07, 6.191510890e-07, 6.601533894e-07,
    7.042174960e-07, 7.516198810e-07, 8.026700798e-07, 8.577162992e-07,
    9.171523598e-07, 9.814263761e-07, 1.051051714e-06, 1.126620940e-06,
    1.208823717e-06, 1.298469871e-06, 1.396519241e-06, 1.504120331e-06,
    1.622660258e-06, 1.753829034e-06, 1.899701664e-06, 2.062841960e-06,
    2.246432056e-06, 2.454431385e-06, 2.691767936e-06, 2.964562817e-06,
    3.280386248e-06, 3.648538771e-06, 4.080345648e-06, 4.589445131e-06,
    5.192042762e-06, 5.907094728e-06, 6.756374599e-06, 7.764370811e-06,
    8.957958837e-06, 1.036579406e-05, 1.201738074e-05, 1.394179089e-05,
    1.616603465e-05, 1.871312147e-05, 2.159989591e-05, 2.483478135e-05,
    2.841561412e-05, 3.232779360e-05, 3.654300798e-05, 4.101881464e-05,
    4.569936137e-05, 5.051753331e-05, 5.539880970e-05, 6.026712494e-05,
    6.505305154e-05, 6.970463642e-05, 7.420116182e-05, 7.856983835e-05,
    8.290478269e-05, 8.738639065e-05, 9.229730107e-05, 9.802877202e-05,
    1.050691580e-04, 1.139655338e-04, 1.252519151e-04, 1.393441992e-04,
    1.564128520e-04, 1.762573331e-04, 1.982168713e-04, 2.211549037e-04,
    2.435448247e-04, 2.636620737e-04, 2.798569438e-04, 2.908536312e-04,
    2.960052016e-04, 2.954391799e-04, 2.900546979e-04, 2.813715263e-04,
    2.712703900e-04, 2.616894965e-04, 2.543466585e-04, 2.505406428e-04,
    2.510574357e-04, 2.561780410e-04, 2.657635709e-04, 2.793854133e-04,
    2.964727999e-04, 3.164637411e-04, 3.389641015e-04, 3.639403888e-04,
    3.919901141e-04, 4.247377694e-04, 4.653695419e-04, 5.192118200e-04,
    5.940654007e-04, 6.997994440e-04, 8.466832667e-04, 1.042341709e-03,
    1.288114916e-03, 1.576541565e-03, 1.891762555e-03, 2.213193310e-03,
    2.520411920e-03, 2.795851534e-03, 3.023455284e-03, 3.185410520e-03,
    3.261969401e-03, 3.237702371e-03, 3.111807997e-03, 2.905258532e-03,
    2.658465800e-03, 2.419506697e-03, 2.229362904e-03, 2.111939190e-03,
    2.072570746e-03, 2.103341571e-03, 2.190788113e-03, 2.322285313e-03,
    2.489828600e-03, 2.692075169e-03, 2.936873505e-03, 3.247892669e-03,
    3.680553744e-03, 4.349475045e-03, 5.449479174e-03, 7.212088154e-03,
    9.732296475e-03, 1.272272840e-02, 1.545814806e-02, 1.714650989e-02,
    1.752420997e-02, 1.710427595e-02, 1.681193646e-02, 1.739761812e-02,
    1.915902642e-02, 2.205732497e-02, 2.595580612e-02, 3.077089391e-02,
    3.656293088e-02, 4.380404478e-02, 5.390155634e-02, 6.811975286e-02,
    8.294452125e-02, 9.099863764e-02, 9.226777363e-02, 9.379716645e-02,
    9.861551093e-02, 1.052214131e-01, 1.120884146e-01, 1.186223037e-01,
    1.246352860e-01, 1.300705470e-01, 1.349311348e-01, 1.392576291e-01,
    1.431144257e-01, 1.465779130e-01, 1.497260234e-01, 1.526297898e-01,
    1.553475697e-01, 1.579222663e-01, 1.603814345e-01, 1.627397488e-01,
    1.650030146e-01, 1.671727719e-01, 1.692505826e-01, 1.712412860e-01,
    1.731548106e-01, 1.750064775e-01, 1.768160756e-01, 1.786062583e-01,
    1.804009948e-01, 1.822248464e-01, 1.841037510e-01, 1.860677596e-01,
    1.881558040e-01, 1.904221026e-01, 1.929432750e-01, 1.958247077e-01,
    1.992043030e-01, 2.032515673e-01, 2.081602209e-01, 2.141332452e-01,
    2.213606013e-01, 2.299917662e-01, 2.401076974e-01, 2.516998523e-01,
    2.646672163e-01, 2.788443945e-01, 2.940696158e-01, 3.102816162e-01,
    3.275928891e-01, 3.462419806e-01, 3.663372442e-01, 3.874312179e-01,
    4.081768748e-01, 4.264288379e-01, 4.399581803e-01, 4.474968274e-01,
    4.494921885e-01, 4.480906469e-01, 4.463934345e-01, 4.474645591e-01,
    4.535982063e-01, 4.657229966e-01, 4.835661342e-01, 5.052112334e-01,
    5.274706609e-01, 5.465566213e-01, 5.592752960e-01, 5.641957962e-01,
    5.620833427e-01, 5.552850367e-01, 5.464764773e-01, 5.375751217e-01,
    5.293744111e-01, 5.218594632e-01, 5.147741288e-01, 5.080395427e-01,
    5.018856605e-01, 4.967714614e-01, 4.932292238e-01, 4.917269891e-01,
    4.925849324e-01, 4.959454794e-01, 5.017837783e-01, 5.099432179e-01,
    5.201824218e-01, 5.322228100e-01, 5.457888792e-01, 5.606365824e-01,
    5.765682663e-01, 5.934351744e-01, 6.111303230e-01, 6.295755140e-01,
    6.487064317e-01, 6.684593280e-01, 6.887618798e-01, 7.095296016e-01,
    7.306678472e-01, 7.520781232e-01, 7.736663130e-01, 7.953496574e-01,
    8.170591040e-01, 8.387340529e-01, 8.603076172e-01, 8.816822184e-01,
    9.026974538e-01, 9.230943654e-01, 9.424821293e-01, 9.603143256e-01,
    9.758820406e-01, 9.883299368e-01, 9.966993296e-01, 1.000000000e+00,
    9.973120989e-01, 9.879283927e-01, 9.716030719e-01, 9.492952830e-01,
    9.260010128e-01, 9.166952716e-01, 9.385433865e-01, 9.634035507e-01,
    9.139661194e-01, 7.812400436e-01, 6.434010671e-01, 5.442065015e-01,
    4.727804971e-01, 4.141214294e-01, 3.635726057e-01, 3.215722118e-01,
    2.907154731e-01, 2.747600233e-01, 2.763443125e-01, 2.926216973e-01,
    3.120393170e-01, 3.177720126e-01, 2.981716942e-01, 2.554219676e-01,
    2.033585143e-01, 1.568473178e-01, 1.233502707e-01, 1.024686449e-01,
    9.024774377e-02, 8.288842704e-02, 7.800932326e-02, 7.442476830e-02,
    7.164218126e-02, 6.954789091e-02, 6.828696396e-02, 6.823642632e-02,
    6.998176189e-02, 7.422085575e-02, 8.154444072e-02, 9.211056716e-02,
    1.053374366e-01, 1.198134277e-01, 1.335680360e-01, 1.446424304e-01,
    1.516728020e-01, 1.541566546e-01, 1.522893233e-01, 1.465713381e-01,
    1.375230550e-01, 1.256875832e-01, 1.118172202e-01, 9.698767124e-02,
    8.247736082e-02, 6.946392234e-02, 5.872718751e-02, 5.051971116e-02,
    4.463654430e-02, 4.060410258e-02, 3.787846237e-02, 3.598191781e-02,
    3.456269345e-02, 3.339886895e-02, 3.237607899e-02, 3.146034947e-02,
    3.067562920e-02, 3.008717363e-02, 2.978805553e-02, 2.988530170e-02,
    3.048301170e-02, 3.166153828e-02, 3.345406529e-02, 3.582433977e-02,
    3.865123145e-02, 4.172632437e-02, 4.476915809e-02, 4.746091997e-02,
    4.949216428e-02, 5.061516221e-02, 5.068871362e-02, 4.970406242e-02,
    4.778506354e-02, 4.516259372e-02, 4.213004851e-02, 3.899128757e-02,
    3.601321195e-02, 3.339237861e-02, 3.124006125e-02, 2.958489760e-02,
    2.838839459e-02, 2.756691605e-02, 2.701423434e-02, 2.662051806e-02,
    2.628580769e-02, 2.592785805e-02, 2.548534552e-02, 2.491784768e-02,
    2.420391248e-02, 2.333820305e-02, 2.232833882e-02, 2.119176632e-02,
    1.995281569e-02, 1.864001278e-02, 1.728368857e-02, 1.591392270e-02,
    1.455885651e-02, 1.324340315e-02, 1.198836500e-02, 1.080994727e-02,
    9.719633383e-03, 8.724368139e-03, 7.826980998e-03, 7.026775439e-03,
    6.320211339e-03, 5.701614449e-03, 5.163858562e-03, 4.698979964e-03,
    4.298698229e-03, 3.954830908e-03, 3.659600947e-03, 3.405844244e-03,
    3.187130451e-03, 2.997813108e-03, 2.833025949e-03, 2.688641343e-03,
    2.561204784e-03, 2.447856830e-03, 2.346251156e-03, 2.254474833e-03,
    2.170974768e-03, 2.094492443e-03, 2.024007790e-03, 1.958692104e-03,
    1.897869331e-03, 1.840984765e-03, 1.787580054e-03, 1.737273443e-03,
    1.689744272e-03, 1.644720850e-03, 1.601970998e-03, 1.561294658e-03,
    1.522518103e-03, 1.485489382e-03, 1.450074700e-03, 1.416155541e-03,
    1.383626339e-03, 1.352392593e-03, 1.322369321e-03, 1.293479782e-03,
    1.265654410e-03,
};
constexpr double kFirstShiftThz = -50.00;
constexpr double kShiftStepThz = 0.25;
}  // namespace

RamanProfile RamanProfile::silica_default() {
  RamanProfile profile;
  profile.table.reserve(kSilica300K.size());
  for (std::size_t i = 0; i < kSilica300K.size(); ++i) {
    profile.table.push_back({kFirstShiftThz + kShiftStepThz * static_cast<double>(i), kSilica300K[i]});
  }
  return profile;
}

}  // namespace dpsqkd
