// Frozen Monte Carlo moments for the panel unit-root tests.
// Generated by tools/gen_moment_tables.cpp (100000 replications per entry,
// seed 0x7a31c9d201551b6d). Regenerate with: build/tools/gen_moment_tables > src/unit_root_tables.cpp

#include "unit_root_tables.hpp"

namespace tfpanel::detail {

namespace {
constexpr LlcTableRow kLlcNone[] = {
    {6, 0.044142, 1.603826},
    {7, 0.042250, 1.395053},
    {8, 0.027424, 1.280715},
    {9, 0.025937, 1.225005},
    {10, 0.018739, 1.177353},
    {11, 0.012233, 1.170946},
    {12, 0.012089, 1.127645},
    {13, 0.011422, 1.111016},
    {14, 0.012410, 1.115562},
    {15, 0.011315, 1.096623},
    {16, 0.009677, 1.089281},
    {17, 0.002973, 1.074006},
    {18, 0.006093, 1.076424},
    {19, 0.004014, 1.071205},
    {20, 0.007991, 1.071586},
    {21, 0.003319, 1.061750},
    {22, 0.005545, 1.063495},
    {23, 0.007478, 1.070687},
    {24, 0.012948, 1.056450},
    {25, 0.000822, 1.044950},
    {26, 0.003832, 1.042209},
    {27, 0.005771, 1.045651},
    {28, 0.007441, 1.042417},
    {29, 0.003553, 1.043735},
    {30, 0.006468, 1.043052},
    {31, 0.004210, 1.041954},
    {32, 0.004165, 1.036580},
    {33, 0.003138, 1.034967},
    {34, 0.003487, 1.037186},
    {35, 0.005128, 1.034537},
    {36, -0.001034, 1.022593},
    {37, 0.006664, 1.025860},
    {38, 0.001780, 1.018794},
    {39, -0.002899, 1.023605},
    {40, 0.002877, 1.025609},
    {41, 0.001884, 1.024964},
    {42, 0.004500, 1.033796},
    {43, 0.002416, 1.024664},
    {44, 0.002371, 1.030243},
    {45, -0.000238, 1.031702},
    {46, 0.002003, 1.022082},
    {47, -0.000553, 1.013681},
    {48, -0.000501, 1.022316},
    {49, 0.005947, 1.022873},
    {50, -0.000270, 1.017052},
    {51, 0.001465, 1.016127},
    {52, -0.000303, 1.018775},
    {53, 0.002811, 1.021725},
    {54, 0.004422, 1.018294},
    {55, 0.003862, 1.024139},
    {56, -0.001730, 1.006948},
    {57, 0.003635, 1.015952},
    {58, 0.003375, 1.023387},
    {59, 0.003364, 1.015447},
    {60, 0.001180, 1.022232},
    {65, 0.003309, 1.021333},
    {70, 0.003076, 1.011212},
    {75, 0.003592, 1.016598},
    {80, -0.000014, 1.015517},
    {85, 0.000453, 1.010743},
    {90, 0.003869, 1.012815},
    {95, 0.001047, 1.010063},
    {100, 0.010482, 1.012087},
    {110, -0.000889, 1.016406},
    {120, 0.001972, 1.008206},
    {150, 0.005595, 1.006813},
    {200, -0.001974, 0.999286},
    {250, 0.001982, 1.009722},
};

constexpr LlcTableRow kLlcIntercept[] = {
    {6, -1.499815, 2.494971},
    {7, -1.342493, 1.789366},
    {8, -1.174373, 1.325477},
    {9, -1.060124, 1.180978},
    {10, -0.977294, 1.141445},
    {11, -0.965964, 1.029881},
    {12, -0.919988, 1.002763},
    {13, -0.872393, 0.984735},
    {14, -0.838814, 0.972502},
    {15, -0.812497, 0.949054},
    {16, -0.819265, 0.939256},
    {17, -0.793459, 0.929837},
    {18, -0.776119, 0.916501},
    {19, -0.755325, 0.914757},
    {20, -0.743988, 0.905476},
    {21, -0.730552, 0.887831},
    {22, -0.717902, 0.884499},
    {23, -0.723458, 0.884537},
    {24, -0.715348, 0.872917},
    {25, -0.704247, 0.876655},
    {26, -0.693303, 0.869266},
    {27, -0.687485, 0.861219},
    {28, -0.680694, 0.858456},
    {29, -0.672951, 0.856890},
    {30, -0.662947, 0.856569},
    {31, -0.672412, 0.859206},
    {32, -0.663985, 0.860241},
    {33, -0.661123, 0.851957},
    {34, -0.653903, 0.842894},
    {35, -0.651531, 0.831997},
    {36, -0.645607, 0.835796},
    {37, -0.639836, 0.832825},
    {38, -0.637169, 0.827459},
    {39, -0.631864, 0.831301},
    {40, -0.628309, 0.827970},
    {41, -0.637249, 0.828029},
    {42, -0.632492, 0.828169},
    {43, -0.625006, 0.822114},
    {44, -0.624409, 0.824358},
    {45, -0.622883, 0.821453},
    {46, -0.619701, 0.814989},
    {47, -0.617737, 0.816643},
    {48, -0.614333, 0.816799},
    {49, -0.609908, 0.811035},
    {50, -0.607361, 0.813017},
    {51, -0.605896, 0.807921},
    {52, -0.604041, 0.810626},
    {53, -0.608632, 0.809236},
    {54, -0.607931, 0.808182},
    {55, -0.604012, 0.810398},
    {56, -0.602198, 0.804546},
    {57, -0.603459, 0.807268},
    {58, -0.599274, 0.804166},
    {59, -0.599194, 0.801397},
    {60, -0.592830, 0.801305},
    {65, -0.586854, 0.790900},
    {70, -0.583765, 0.792825},
    {75, -0.580969, 0.786255},
    {80, -0.571957, 0.782758},
    {85, -0.574137, 0.778924},
    {90, -0.570959, 0.778076},
    {95, -0.563772, 0.779405},
    {100, -0.563480, 0.768579},
    {110, -0.560217, 0.769671},
    {120, -0.553948, 0.757542},
    {150, -0.548980, 0.756241},
    {200, -0.537973, 0.746557},
    {250, -0.531852, 0.739440},
};

constexpr LlcTableRow kLlcTrend[] = {
    {6, -1.794783, 8.645828},
    {7, -1.450736, 2.891007},
    {8, -1.234747, 1.859498},
    {9, -1.095006, 1.501094},
    {10, -1.004697, 1.336119},
    {11, -0.990183, 1.247487},
    {12, -0.939729, 1.198244},
    {13, -0.894588, 1.135670},
    {14, -0.859522, 1.111194},
    {15, -0.828732, 1.071238},
    {16, -0.832201, 1.066684},
    {17, -0.808678, 1.040782},
    {18, -0.789552, 1.020314},
    {19, -0.770619, 1.000990},
    {20, -0.754886, 0.979249},
    {21, -0.739913, 0.967640},
    {22, -0.726837, 0.952374},
    {23, -0.734450, 0.953889},
    {24, -0.725093, 0.935250},
    {25, -0.711947, 0.924178},
    {26, -0.704203, 0.910069},
    {27, -0.696900, 0.901971},
    {28, -0.686214, 0.885476},
    {29, -0.679052, 0.874568},
    {30, -0.673183, 0.865937},
    {31, -0.678558, 0.881360},
    {32, -0.674051, 0.872185},
    {33, -0.668532, 0.865676},
    {34, -0.662079, 0.852757},
    {35, -0.656141, 0.848200},
    {36, -0.651093, 0.837614},
    {37, -0.647817, 0.833631},
    {38, -0.641739, 0.826076},
    {39, -0.637443, 0.819093},
    {40, -0.634102, 0.810148},
    {41, -0.641990, 0.821086},
    {42, -0.636822, 0.819593},
    {43, -0.633321, 0.812419},
    {44, -0.628969, 0.801231},
    {45, -0.626250, 0.801099},
    {46, -0.624066, 0.792923},
    {47, -0.621051, 0.788483},
    {48, -0.616365, 0.787824},
    {49, -0.616799, 0.777194},
    {50, -0.612894, 0.774031},
    {51, -0.610787, 0.776085},
    {52, -0.608634, 0.764401},
    {53, -0.612381, 0.779142},
    {54, -0.609802, 0.778961},
    {55, -0.608469, 0.767361},
    {56, -0.607487, 0.762900},
    {57, -0.604134, 0.761924},
    {58, -0.602389, 0.753771},
    {59, -0.600999, 0.754262},
    {60, -0.598635, 0.746191},
    {65, -0.591062, 0.731478},
    {70, -0.590772, 0.727571},
    {75, -0.582071, 0.717655},
    {80, -0.576526, 0.701870},
    {85, -0.576689, 0.705760},
    {90, -0.573598, 0.690858},
    {95, -0.568188, 0.684355},
    {100, -0.563564, 0.681734},
    {110, -0.562436, 0.670021},
    {120, -0.556574, 0.655621},
    {150, -0.548896, 0.642102},
    {200, -0.537504, 0.617270},
    {250, -0.533167, 0.599997},
};

constexpr IpsTableRow kIpsIntercept[] = {
    {5, 0, -1.554615, 2.618963},
    {6, 0, -1.529030, 1.779197},
    {7, 0, -1.510247, 1.391225},
    {8, 0, -1.506180, 1.243438},
    {9, 0, -1.510708, 1.149359},
    {10, 0, -1.508479, 1.063447},
    {11, 0, -1.513497, 1.018828},
    {12, 0, -1.508343, 0.991957},
    {13, 0, -1.517247, 0.957728},
    {14, 0, -1.512398, 0.941307},
    {15, 0, -1.515754, 0.908196},
    {16, 0, -1.512118, 0.897666},
    {17, 0, -1.518552, 0.882828},
    {18, 0, -1.517492, 0.882801},
    {19, 0, -1.514710, 0.858236},
    {20, 0, -1.516479, 0.855143},
    {21, 0, -1.521515, 0.843010},
    {22, 0, -1.516666, 0.838083},
    {23, 0, -1.522766, 0.831234},
    {24, 0, -1.520067, 0.821515},
    {25, 0, -1.516337, 0.816942},
    {26, 0, -1.521797, 0.816278},
    {27, 0, -1.519541, 0.810745},
    {28, 0, -1.519648, 0.811472},
    {29, 0, -1.524672, 0.802665},
    {30, 0, -1.519476, 0.789043},
    {31, 0, -1.523636, 0.795718},
    {32, 0, -1.523044, 0.790286},
    {33, 0, -1.525443, 0.791207},
    {34, 0, -1.522824, 0.784047},
    {35, 0, -1.527885, 0.781464},
    {36, 0, -1.528858, 0.773246},
    {37, 0, -1.523797, 0.774579},
    {38, 0, -1.530710, 0.769617},
    {39, 0, -1.526390, 0.771913},
    {40, 0, -1.525078, 0.775931},
    {41, 0, -1.520343, 0.767574},
    {42, 0, -1.519324, 0.772081},
    {43, 0, -1.526750, 0.767267},
    {44, 0, -1.529520, 0.769843},
    {45, 0, -1.528867, 0.765788},
    {46, 0, -1.524475, 0.759444},
    {47, 0, -1.527334, 0.765768},
    {48, 0, -1.526415, 0.762896},
    {49, 0, -1.527150, 0.758306},
    {50, 0, -1.526027, 0.761830},
    {51, 0, -1.530511, 0.756212},
    {52, 0, -1.527271, 0.757780},
    {53, 0, -1.527522, 0.753723},
    {54, 0, -1.530494, 0.746675},
    {55, 0, -1.532257, 0.751252},
    {56, 0, -1.527491, 0.752288},
    {57, 0, -1.523163, 0.749768},
    {58, 0, -1.530148, 0.744799},
    {59, 0, -1.526984, 0.756158},
    {60, 0, -1.529560, 0.749493},
    {65, 0, -1.526344, 0.750159},
    {70, 0, -1.528125, 0.748000},
    {75, 0, -1.528401, 0.740743},
    {80, 0, -1.530206, 0.736274},
    {85, 0, -1.530654, 0.738338},
    {90, 0, -1.527702, 0.730598},
    {95, 0, -1.530306, 0.731080},
    {100, 0, -1.529657, 0.732935},
    {110, 0, -1.532677, 0.727362},
    {120, 0, -1.534136, 0.724801},
    {150, 0, -1.531016, 0.730796},
    {200, 0, -1.533084, 0.714695},
    {250, 0, -1.531947, 0.712823},
    {5, 1, -1.772693, 12.490678},
    {6, 1, -1.558632, 3.131729},
    {7, 1, -1.514635, 2.008758},
    {8, 1, -1.496191, 1.568154},
    {9, 1, -1.492292, 1.373692},
    {10, 1, -1.491985, 1.247890},
    {11, 1, -1.490773, 1.177661},
    {12, 1, -1.490662, 1.125299},
    {13, 1, -1.493507, 1.066623},
    {14, 1, -1.492734, 1.037483},
    {15, 1, -1.499435, 1.001257},
    {16, 1, -1.507511, 0.972547},
    {17, 1, -1.498001, 0.950013},
    {18, 1, -1.502256, 0.943737},
    {19, 1, -1.506986, 0.935672},
    {20, 1, -1.515384, 0.908351},
    {21, 1, -1.511692, 0.901091},
    {22, 1, -1.508828, 0.884772},
    {23, 1, -1.514794, 0.887833},
    {24, 1, -1.516203, 0.874723},
    {25, 1, -1.514103, 0.866454},
    {26, 1, -1.513719, 0.860323},
    {27, 1, -1.514411, 0.849568},
    {28, 1, -1.516323, 0.842074},
    {29, 1, -1.508518, 0.837525},
    {30, 1, -1.517271, 0.836737},
    {31, 1, -1.518811, 0.841720},
    {32, 1, -1.510031, 0.825376},
    {33, 1, -1.517577, 0.817531},
    {34, 1, -1.518355, 0.821318},
    {35, 1, -1.518671, 0.816036},
    {36, 1, -1.521330, 0.810253},
    {37, 1, -1.518575, 0.813884},
    {38, 1, -1.518123, 0.810459},
    {39, 1, -1.520518, 0.801913},
    {40, 1, -1.516470, 0.801188},
    {41, 1, -1.521570, 0.800238},
    {42, 1, -1.523422, 0.791896},
    {43, 1, -1.518347, 0.789240},
    {44, 1, -1.519036, 0.789036},
    {45, 1, -1.517616, 0.787790},
    {46, 1, -1.524026, 0.785758},
    {47, 1, -1.522483, 0.788080},
    {48, 1, -1.524437, 0.781112},
    {49, 1, -1.521328, 0.785880},
    {50, 1, -1.521776, 0.781232},
    {51, 1, -1.524719, 0.780163},
    {52, 1, -1.523088, 0.775479},
    {53, 1, -1.526149, 0.776508},
    {54, 1, -1.521279, 0.777048},
    {55, 1, -1.520772, 0.773292},
    {56, 1, -1.526298, 0.768343},
    {57, 1, -1.524636, 0.771920},
    {58, 1, -1.526464, 0.772024},
    {59, 1, -1.527166, 0.764321},
    {60, 1, -1.521755, 0.765215},
    {65, 1, -1.521699, 0.759313},
    {70, 1, -1.526848, 0.751476},
    {75, 1, -1.533242, 0.757318},
    {80, 1, -1.528041, 0.747911},
    {85, 1, -1.529010, 0.749275},
    {90, 1, -1.523999, 0.741156},
    {95, 1, -1.530910, 0.742595},
    {100, 1, -1.531159, 0.740923},
    {110, 1, -1.530537, 0.734274},
    {120, 1, -1.526523, 0.732314},
    {150, 1, -1.530525, 0.732697},
    {200, 1, -1.532949, 0.730802},
    {250, 1, -1.528648, 0.717658},
};

constexpr IpsTableRow kIpsTrend[] = {
    {5, 0, -2.471179, 16.737659},
    {6, 0, -2.232237, 3.209854},
    {7, 0, -2.181689, 2.038228},
    {8, 0, -2.173785, 1.478256},
    {9, 0, -2.167052, 1.278689},
    {10, 0, -2.166482, 1.132480},
    {11, 0, -2.160944, 1.046892},
    {12, 0, -2.163026, 0.967940},
    {13, 0, -2.160363, 0.923276},
    {14, 0, -2.166154, 0.890152},
    {15, 0, -2.167306, 0.863821},
    {16, 0, -2.165682, 0.843185},
    {17, 0, -2.166373, 0.823142},
    {18, 0, -2.167915, 0.796126},
    {19, 0, -2.167214, 0.781282},
    {20, 0, -2.168166, 0.768758},
    {21, 0, -2.167698, 0.756690},
    {22, 0, -2.167834, 0.750058},
    {23, 0, -2.170465, 0.732767},
    {24, 0, -2.173149, 0.729893},
    {25, 0, -2.173907, 0.721040},
    {26, 0, -2.172366, 0.716375},
    {27, 0, -2.175432, 0.705436},
    {28, 0, -2.175118, 0.698206},
    {29, 0, -2.174590, 0.694763},
    {30, 0, -2.175015, 0.690443},
    {31, 0, -2.171657, 0.686990},
    {32, 0, -2.174525, 0.688056},
    {33, 0, -2.174404, 0.673756},
    {34, 0, -2.168622, 0.673458},
    {35, 0, -2.174404, 0.662794},
    {36, 0, -2.177071, 0.659857},
    {37, 0, -2.169119, 0.661642},
    {38, 0, -2.176892, 0.660429},
    {39, 0, -2.174586, 0.659397},
    {40, 0, -2.174804, 0.653357},
    {41, 0, -2.176840, 0.646044},
    {42, 0, -2.177731, 0.647382},
    {43, 0, -2.175797, 0.648106},
    {44, 0, -2.174075, 0.642758},
    {45, 0, -2.172522, 0.639609},
    {46, 0, -2.174440, 0.631414},
    {47, 0, -2.176011, 0.637643},
    {48, 0, -2.173136, 0.636449},
    {49, 0, -2.179326, 0.633630},
    {50, 0, -2.177776, 0.638444},
    {51, 0, -2.172473, 0.630347},
    {52, 0, -2.180249, 0.631666},
    {53, 0, -2.174867, 0.627587},
    {54, 0, -2.172466, 0.625575},
    {55, 0, -2.176779, 0.624613},
    {56, 0, -2.176423, 0.627371},
    {57, 0, -2.178464, 0.626209},
    {58, 0, -2.179719, 0.622849},
    {59, 0, -2.175452, 0.616042},
    {60, 0, -2.176044, 0.618030},
    {65, 0, -2.178854, 0.618605},
    {70, 0, -2.182530, 0.620079},
    {75, 0, -2.172809, 0.606664},
    {80, 0, -2.177371, 0.607189},
    {85, 0, -2.178480, 0.602745},
    {90, 0, -2.180955, 0.606146},
    {95, 0, -2.179891, 0.596968},
    {100, 0, -2.179441, 0.598402},
    {110, 0, -2.176477, 0.591662},
    {120, 0, -2.181423, 0.589241},
    {150, 0, -2.176996, 0.589184},
    {200, 0, -2.179975, 0.585567},
    {250, 0, -2.174858, 0.574312},
    {5, 1, -18.369262, 5307974.138305},
    {6, 1, -2.642924, 21.648757},
    {7, 1, -2.284388, 4.767979},
    {8, 1, -2.198143, 2.273685},
    {9, 1, -2.182577, 1.714343},
    {10, 1, -2.163023, 1.475027},
    {11, 1, -2.156609, 1.285028},
    {12, 1, -2.167271, 1.188658},
    {13, 1, -2.162298, 1.090761},
    {14, 1, -2.169557, 1.032940},
    {15, 1, -2.162393, 0.978388},
    {16, 1, -2.167348, 0.943607},
    {17, 1, -2.164183, 0.908771},
    {18, 1, -2.170041, 0.879585},
    {19, 1, -2.168821, 0.859423},
    {20, 1, -2.171877, 0.838414},
    {21, 1, -2.174969, 0.821845},
    {22, 1, -2.170410, 0.811389},
    {23, 1, -2.170589, 0.793965},
    {24, 1, -2.167254, 0.785066},
    {25, 1, -2.176716, 0.772370},
    {26, 1, -2.176244, 0.761300},
    {27, 1, -2.171176, 0.754701},
    {28, 1, -2.175320, 0.743895},
    {29, 1, -2.169971, 0.734206},
    {30, 1, -2.173625, 0.724581},
    {31, 1, -2.176479, 0.730219},
    {32, 1, -2.178061, 0.710915},
    {33, 1, -2.177523, 0.711400},
    {34, 1, -2.174169, 0.706378},
    {35, 1, -2.172922, 0.705139},
    {36, 1, -2.177157, 0.697474},
    {37, 1, -2.175440, 0.681861},
    {38, 1, -2.176362, 0.689876},
    {39, 1, -2.173101, 0.684777},
    {40, 1, -2.174506, 0.683870},
    {41, 1, -2.176709, 0.680840},
    {42, 1, -2.177198, 0.671195},
    {43, 1, -2.173399, 0.672456},
    {44, 1, -2.174690, 0.666917},
    {45, 1, -2.176058, 0.667433},
    {46, 1, -2.178375, 0.662115},
    {47, 1, -2.177313, 0.665029},
    {48, 1, -2.173981, 0.656541},
    {49, 1, -2.177752, 0.659296},
    {50, 1, -2.178076, 0.655126},
    {51, 1, -2.175024, 0.653755},
    {52, 1, -2.176757, 0.651649},
    {53, 1, -2.180054, 0.653088},
    {54, 1, -2.173165, 0.646717},
    {55, 1, -2.177867, 0.646413},
    {56, 1, -2.177391, 0.637981},
    {57, 1, -2.179296, 0.640866},
    {58, 1, -2.174080, 0.639453},
    {59, 1, -2.178545, 0.646745},
    {60, 1, -2.177652, 0.633398},
    {65, 1, -2.180881, 0.626278},
    {70, 1, -2.181713, 0.620694},
    {75, 1, -2.172876, 0.621744},
    {80, 1, -2.179164, 0.617694},
    {85, 1, -2.181545, 0.613159},
    {90, 1, -2.179512, 0.611936},
    {95, 1, -2.179673, 0.604632},
    {100, 1, -2.179040, 0.604206},
    {110, 1, -2.183304, 0.602235},
    {120, 1, -2.177559, 0.596441},
    {150, 1, -2.180263, 0.594120},
    {200, 1, -2.178156, 0.583393},
    {250, 1, -2.179564, 0.582369},
};

} // namespace

std::span<const LlcTableRow> llc_table(Deterministic det) {
    switch (det) {
    case Deterministic::None: return kLlcNone;
    case Deterministic::Intercept: return kLlcIntercept;
    case Deterministic::InterceptTrend: return kLlcTrend;
    }
    return {};
}

std::span<const IpsTableRow> ips_table(Deterministic det) {
    switch (det) {
    case Deterministic::Intercept: return kIpsIntercept;
    case Deterministic::InterceptTrend: return kIpsTrend;
    default: return {};
    }
}

} // namespace tfpanel::detail
