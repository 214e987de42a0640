#pragma once
// Generated by tools/gen_oracles.py (mpmath, 40 digits). Do not edit by hand.

#include <complex>

namespace oracle {

using cplx = std::complex<double>;

struct PcfRow { double gamma, x; cplx z, u, du, v, dv; };
struct WhittakerRow { double x, mu; cplx z, m, dm; };
struct KummerRow { cplx a, b, z, m; };
struct GammaRow { cplx z, gamma, log_gamma; };

inline const PcfRow kPcfOracle[] = {
    {1.0, 3.0e-1, {6.5e-1, 6.5e-1}, {5.3183956116375190291e-1, -4.2117589806869558465e-1}, {-6.0098066953507073598e-1, 3.4432880085382539501e-1}, {6.3709461051626329613e-1, 2.5694299672351947986e-1}, {3.1788750325114506855e-1, 3.7386990034696978731e-1}},
    {1.0, 3.0, {2.0, 2.0}, {-2.4853422425151008902e-1, -8.0350215362715754537e-2}, {2.7037675162960281123e-1, 3.0211025453394163873e-1}, {-6.3261671175800565253e-1, 8.8396122751140967049e-1}, {-1.3670344834380085693, 2.4929743937554086182e-1}},
    {1.0, 1.2e+1, {6.5, 6.5}, {-6.2136860836424578204e-2, 6.1711606018681840956e-3}, {2.2754699345758070458e-1, 1.7547412314456140011e-1}, {-1.0888542321131692234, 8.7400169763620802915e-1}, {-6.3104414679275928451, -7.524272082554371065e-1}},
    {1.0, 4.0e+1, {2.05e+1, 2.05e+1}, {-1.2112299054493250251e-2, 8.6172508966876983106e-3}, {2.1258613322000284924e-1, 3.5192541444283259595e-2}, {-1.8244516477510364751, 3.0702333905028841751e-1}, {-2.1842397102463763911e+1, -1.562735772918540238e+1}},
    {1.0, 3.0e+2, {1.505e+2, 1.505e+2}, {-9.6782347410062729279e-4, 7.5923009992244226326e-4}, {1.299616480530133027e-1, 1.5689479300583153817e-2}, {-3.0254335853141105908, 3.6552610499399626833e-1}, {-2.5516552301251146628e+2, -2.0020824883686239583e+2}},
    {4.0, 3.0e-1, {5.5e-1, 5.5e-1}, {6.2838887063903496798e-1, -3.9049792590589898667e-1}, {-6.7190607196279787336e-1, 3.1358215758543380027e-1}, {6.3971774267747562552e-1, 1.9210664833526254222e-1}, {3.0235135656209969393e-1, 3.0171448446107913866e-1}},
    {4.0, 3.0, {3.25, 3.25}, {1.4687742202566963364e-1, 1.2491741790030277288e-2}, {-2.5082507387498843797e-1, -2.3675443272752593911e-1}, {8.1569932333463845127e-1, -8.6919930735135276181e-1}, {2.6336203829870800649, -5.4480503406874943195e-2}},
    {4.0, 1.2e+1, {1.225e+1, 1.225e+1}, {2.3188241211980017523e-2, -1.6209779298864750356e-2}, {-2.4168393286587146036e-1, -4.0735919953165245898e-2}, {1.6009506425077311307, -2.8062740745369873621e-1}, {1.1521141302706574734e+1, 8.1662983551885848376}},
    {4.0, 4.0e+1, {4.025e+1, 4.025e+1}, {5.6681847599870922625e-3, -2.9628814914137412374e-3}, {-1.7374230914204024916e-1, -5.431023484098359987e-2}, {2.0909730751068456541, -6.5567279015473658919e-1}, {5.5258521745235344499e+1, 2.8947771485500606974e+1}},
    {4.0, 3.0e+2, {3.0025e+2, 3.0025e+2}, {4.6903455764083169522e-4, -2.2172762859386210569e-4}, {-1.0370118802020094898e-1, -3.7125514839954450918e-2}, {3.4099355631181075399, -1.2209062484712453752}, {6.951908899397574054e+2, 3.2866841048495051265e+2}},
    {5.0e-1, 3.0e-1, {8.1317279836452965306e-1, 8.1317279836452965306e-1}, {3.8307484153394314254e-1, -4.5056850511179388828e-1}, {-4.9204578218879187915e-1, 3.8563361075877228116e-1}, {6.1785410196321903206e-1, 3.8046402511821055915e-1}, {3.1444423487359043623e-1, 5.0313473342296275591e-1}},
    {5.0e-1, 3.0, {1.767766952966368811, 1.767766952966368811}, {-2.1203162184490706825e-1, -2.1081003169022309033e-1}, {1.2928088244445310104e-1, 4.0656534199399351726e-1}, {-2.4490111813252749379e-1, 1.0285118641082883271}, {-9.0428827335649501561e-1, 7.4156120510243626706e-1}},
    {5.0e-1, 1.2e+1, {4.9497474683058326708, 4.9497474683058326708}, {7.0498720180356969461e-2, -5.2144857387410839777e-2}, {-3.0653199753309089227e-1, -3.0119236060807741044e-2}, {1.2782028087223458005, -1.6732035459287868932e-1}, {3.5901846217202187633, 2.8369339893578194115}},
    {5.0e-1, 4.0e+1, {1.4849242404917498012e+1, 1.4849242404917498012e+1}, {-6.5306783570062357179e-3, 2.1263953390522465326e-2}, {2.0575050001990415738e-1, -1.1056194235900532474e-1}, {-1.5020526291556514302, -8.0374452909861246617e-1}, {-5.2489933695230911149, -1.7197810345506630625e+1}},
    {5.0e-1, 3.0e+2, {1.0677312395916867618e+2, 1.0677312395916867618e+2}, {-1.3706894764693029365e-3, -1.3001159152572586099e-3}, {3.7833134875415610276e-3, 1.425847060188878573e-1}, {-7.43301352571381601e-2, 2.7962462194415319018}, {-1.5318883768549293964e+2, 1.4531556109646254559e+2}},
};

inline const cplx kWhittakerKappa = {5.3696254174830690282e-2, -2.2020761980575542846e-1};

inline const WhittakerRow kWhittakerOracle[] = {
    {1.0e-2, 2.5e-1, {7.9708551378586567631e-3, 9.4092790174767240831e-3}, {2.9369550212478911367e-2, 2.2411357458848251815e-2}, {2.190263064482750979, -4.7833722987995252071e-1}},
    {1.0e-2, -2.5e-1, {7.9708551378586567631e-3, 9.4092790174767240831e-3}, {3.2361701304144938663e-1, 7.2201933285119635793e-2}, {5.2913235616956686765, -3.9238796930655094019}},
    {5.0e-1, 2.5e-1, {3.9854275689293283816e-1, 4.7046395087383620415e-1}, {4.8213769360845196047e-1, 4.1739076702358884564e-1}, {6.8723771066693590635e-1, -1.8774132483324485904e-2}},
    {5.0e-1, -2.5e-1, {3.9854275689293283816e-1, 4.7046395087383620415e-1}, {6.2297471322562916528e-1, 2.6632358055754961427e-1}, {9.657071537438290544e-2, 2.7175654335669514153e-1}},
    {2.0, 2.5e-1, {1.5941710275717313526, 1.8818558034953448166}, {5.1379745893607906428e-1, 1.2892688724215653344}, {8.8791903207323782964e-2, 5.9633924849997441337e-1}},
    {2.0, -2.5e-1, {1.5941710275717313526, 1.8818558034953448166}, {-2.2382331638984776843e-1, 7.1754285135370088919e-1}, {-2.9950439294445327743e-1, 6.1576610118652251381e-1}},
    {1.0e+1, 2.5e-1, {7.9708551378586567631, 9.4092790174767240831}, {1.8750261688860047732e+1, -2.0811004416960957876e+1}, {9.9510819692784966318, -1.0381797549162207354e+1}},
    {1.0e+1, -2.5e-1, {7.9708551378586567631, 9.4092790174767240831}, {2.220389887528666045e+1, -4.3149737372701595967}, {1.1449986180667262769e+1, -1.875671277753015719}},
    {3.0e+1, 2.5e-1, {2.3912565413575970289e+1, 2.8227837052430172249e+1}, {-6.3719402593913044594e+4, 4.3028100790378999113e+4}, {-3.2320371530301785927e+4, 2.135584456299912996e+4}},
    {3.0e+1, -2.5e-1, {2.3912565413575970289e+1, 2.8227837052430172249e+1}, {-6.197874062911031359e+4, -3.1582142364468595047e+3}, {-3.1209777526435911927e+4, -1.9046594054683662026e+3}},
    {7.2e+1, 2.5e-1, {5.7390156992582328695e+1, 6.7746808925832413398e+1}, {-1.1898495750882322136e+12, -6.7129116120432623642e+11}, {-5.9535490175502675083e+11, -3.3915622611631175576e+11}},
    {7.2e+1, -2.5e-1, {5.7390156992582328695e+1, 6.7746808925832413398e+1}, {-4.4184677042740741023e+11, -1.0102952221388906166e+12}, {-2.1949760932033325714e+11, -5.076208820874718222e+11}},
};

inline const KummerRow kKummerOracle[] = {
    {{5.0e-1, 0.0}, {1.5, 0.0}, {2.0, 1.0}, {1.9360411765799728344, 1.141014133258882927}},
    {{-3.0, 0.0}, {2.0, 0.0}, {5.0, 0.0}, {7.9166666666666666667e-1, 0.0}},
    {{1.0, 1.0}, {5.0e-1, 0.0}, {-1.0e+1, 0.0}, {1.030706206074417056e-1, 3.680813357413566773e-1}},
    {{3.0e-1, 0.0}, {1.7, 0.0}, {0.0, 5.0e+1}, {2.8152668068351983771e-1, 1.4232833630931641857e-1}},
    {{2.0, 0.0}, {3.0, 0.0}, {4.5e+1, 0.0}, {1.5181312854610806867e+18, 0.0}},
    {{2.5e-1, 0.0}, {5.0e-1, 0.0}, {3.0e+1, 4.0e+1}, {-9.3568995411045954452e+11, 1.7325031040309667314e+12}},
};

inline const GammaRow kGammaOracle[] = {
    {{5.0e-1, 2.0}, {8.9855176706431635814e-2, -6.049376029288756848e-2}, {-2.2226558640532582191, -5.9253698197703458893e-1}},
    {{-3.5, 1.0000000000000000555e-1}, {2.5512602929438000495e-1, 3.5665986694287588872e-2}, {-1.3563202092968518733, -1.2427473264110871357e+1}},
    {{5.0, 0.0}, {2.4e+1, 0.0}, {3.1780538303479456196, 0.0}},
    {{1.0000000000000000555e-1, -7.0}, {1.8472584713886632525e-5, 5.6256095355659045196e-6}, {-1.0854877044420902517e+1, -5.9875701533014403073}},
    {{2.0e+1, 1.0}, {-1.1684577853016535616e+17, 2.0133283732238090557e+16}, {3.9314259987890606077e+1, 2.9709616680231353121}},
};

}  // namespace oracle
