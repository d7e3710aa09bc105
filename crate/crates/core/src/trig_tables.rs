//! Fixed-point trigonometry tables, Q16.16, one entry per quarter degree.
//!
//! Generated offline with 50-digit arithmetic; entries are round-half-up of
//! the exact value times 65536. Do not edit by hand.

/// `tan(k * 0.25deg)` for `k = 0..=360`; the 90 degree entry saturates.
pub(crate) const TAN_Q16: [u32; 361] = [
    0, 286, 572, 858, 1144, 1430, 1716, 2002, 2289, 2575, 2861, 3148, 3435, 3721, 4008, 4295, 4583,
    4870, 5158, 5446, 5734, 6022, 6310, 6599, 6888, 7177, 7467, 7757, 8047, 8337, 8628, 8919, 9210,
    9502, 9794, 10087, 10380, 10673, 10967, 11261, 11556, 11851, 12146, 12442, 12739, 13036, 13333,
    13632, 13930, 14229, 14529, 14829, 15130, 15432, 15734, 16037, 16340, 16644, 16949, 17254,
    17560, 17867, 18175, 18483, 18792, 19102, 19413, 19724, 20036, 20349, 20663, 20978, 21294,
    21611, 21928, 22246, 22566, 22886, 23208, 23530, 23853, 24178, 24503, 24829, 25157, 25486,
    25815, 26146, 26478, 26811, 27146, 27482, 27818, 28156, 28496, 28837, 29179, 29522, 29866,
    30213, 30560, 30909, 31259, 31611, 31964, 32319, 32675, 33033, 33392, 33753, 34116, 34480,
    34846, 35214, 35583, 35954, 36327, 36702, 37078, 37457, 37837, 38219, 38604, 38990, 39378,
    39768, 40161, 40555, 40951, 41350, 41751, 42154, 42560, 42967, 43377, 43790, 44205, 44622,
    45042, 45464, 45889, 46316, 46746, 47179, 47615, 48053, 48494, 48938, 49385, 49835, 50288,
    50743, 51202, 51664, 52130, 52598, 53070, 53545, 54024, 54506, 54991, 55480, 55973, 56469,
    56970, 57474, 57981, 58493, 59009, 59529, 60053, 60581, 61113, 61650, 62191, 62737, 63287,
    63842, 64402, 64967, 65536, 66110, 66690, 67275, 67865, 68460, 69061, 69667, 70279, 70896,
    71520, 72150, 72785, 73427, 74075, 74729, 75391, 76058, 76733, 77414, 78103, 78798, 79502,
    80212, 80930, 81656, 82390, 83132, 83882, 84641, 85408, 86184, 86969, 87763, 88567, 89380,
    90203, 91035, 91878, 92731, 93595, 94470, 95355, 96253, 97161, 98082, 99014, 99959, 100917,
    101887, 102871, 103868, 104880, 105905, 106945, 108000, 109070, 110156, 111258, 112376, 113512,
    114664, 115834, 117023, 118230, 119456, 120702, 121968, 123255, 124563, 125893, 127246, 128622,
    130021, 131445, 132894, 134369, 135870, 137399, 138956, 140542, 142159, 143806, 145485, 147196,
    148942, 150722, 152539, 154393, 156286, 158218, 160191, 162207, 164267, 166373, 168526, 170727,
    172979, 175284, 177643, 180059, 182533, 185068, 187666, 190330, 193063, 195866, 198744, 201699,
    204734, 207854, 211060, 214359, 217752, 221246, 224844, 228551, 232373, 236315, 240383, 244584,
    248923, 253409, 258049, 262851, 267824, 272977, 278321, 283868, 289627, 295614, 301841, 308323,
    315076, 322120, 329472, 337153, 345188, 353601, 362419, 371673, 381397, 391628, 402406, 413778,
    425794, 438512, 451994, 466313, 481549, 497795, 515155, 533748, 553711, 575202, 598405, 623533,
    650839, 680617, 713223, 749080, 788701, 832714, 881893, 937208, 999886, 1071504, 1154126,
    1250501, 1364383, 1501021, 1668003, 1876705, 2145011, 2502719, 3003472, 3754555, 5006296,
    7509682, 15019650, 4294967295,
];

/// `tan((k + 0.5) * 0.25deg)` for `k = 0..360`: rounding boundaries between table steps.
pub(crate) const TAN_MID_Q16: [u32; 360] = [
    143, 429, 715, 1001, 1287, 1573, 1859, 2145, 2432, 2718, 3005, 3291, 3578, 3865, 4152, 4439,
    4726, 5014, 5302, 5590, 5878, 6166, 6455, 6744, 7033, 7322, 7612, 7902, 8192, 8483, 8773, 9065,
    9356, 9648, 9941, 10233, 10526, 10820, 11114, 11408, 11703, 11999, 12294, 12591, 12887, 13185,
    13482, 13781, 14080, 14379, 14679, 14980, 15281, 15583, 15885, 16188, 16492, 16796, 17101,
    17407, 17714, 18021, 18329, 18638, 18947, 19257, 19568, 19880, 20193, 20506, 20821, 21136,
    21452, 21769, 22087, 22406, 22726, 23047, 23369, 23691, 24015, 24340, 24666, 24993, 25321,
    25650, 25981, 26312, 26645, 26979, 27314, 27650, 27987, 28326, 28666, 29007, 29350, 29694,
    30039, 30386, 30734, 31084, 31435, 31787, 32141, 32497, 32854, 33212, 33573, 33934, 34298,
    34663, 35030, 35398, 35768, 36141, 36514, 36890, 37267, 37647, 38028, 38411, 38796, 39184,
    39573, 39964, 40357, 40753, 41151, 41550, 41952, 42357, 42763, 43172, 43583, 43997, 44413,
    44831, 45252, 45676, 46102, 46531, 46962, 47397, 47833, 48273, 48716, 49161, 49609, 50061,
    50515, 50972, 51433, 51897, 52364, 52834, 53307, 53784, 54264, 54748, 55235, 55726, 56221,
    56719, 57221, 57727, 58237, 58750, 59268, 59790, 60316, 60847, 61381, 61920, 62464, 63012,
    63564, 64122, 64684, 65251, 65823, 66400, 66982, 67569, 68161, 68759, 69363, 69972, 70587,
    71207, 71834, 72467, 73105, 73750, 74401, 75059, 75724, 76395, 77073, 77758, 78450, 79149,
    79856, 80570, 81292, 82022, 82760, 83506, 84261, 85023, 85795, 86576, 87365, 88164, 88972,
    89790, 90618, 91455, 92303, 93162, 94031, 94911, 95803, 96705, 97620, 98546, 99485, 100436,
    101400, 102377, 103368, 104372, 105390, 106423, 107471, 108533, 109611, 110705, 111815, 112942,
    114086, 115247, 116426, 117624, 118841, 120077, 121333, 122609, 123907, 125226, 126567, 127931,
    129318, 130730, 132166, 133628, 135116, 136631, 138174, 139746, 141347, 142978, 144641, 146336,
    148065, 149828, 151626, 153461, 155334, 157247, 159199, 161194, 163232, 165314, 167443, 169620,
    171847, 174125, 176457, 178844, 181288, 183793, 186359, 188990, 191688, 194456, 197296, 200212,
    203206, 206283, 209446, 212698, 216043, 219486, 223031, 226684, 230448, 234329, 238333, 242467,
    246736, 251147, 255709, 260429, 265315, 270377, 275625, 281069, 286720, 292591, 298696, 305049,
    311665, 318561, 325756, 333270, 341125, 349345, 357957, 366989, 376474, 386447, 396946, 408015,
    419702, 432061, 445153, 459044, 473811, 489540, 506329, 524289, 543549, 564255, 586577, 610714,
    636897, 665398, 696542, 730715, 768384, 810114, 856602, 908714, 967538, 1034462, 1111287,
    1200388, 1304968, 1429451, 1580120, 1766219, 2001918, 2310110, 2730338, 3337292, 4291022,
    6007660, 10013020, 30039442,
];

/// `sin(k * 0.25deg)` for `k = 0..=360`.
pub(crate) const SIN_Q16: [i32; 361] = [
    0, 286, 572, 858, 1144, 1430, 1716, 2001, 2287, 2573, 2859, 3144, 3430, 3715, 4001, 4286, 4572,
    4857, 5142, 5427, 5712, 5997, 6281, 6566, 6850, 7135, 7419, 7703, 7987, 8271, 8554, 8838, 9121,
    9404, 9687, 9970, 10252, 10534, 10817, 11098, 11380, 11662, 11943, 12224, 12505, 12785, 13066,
    13346, 13626, 13905, 14185, 14464, 14742, 15021, 15299, 15577, 15855, 16132, 16409, 16686,
    16962, 17238, 17514, 17789, 18064, 18339, 18613, 18887, 19161, 19434, 19707, 19980, 20252,
    20524, 20795, 21066, 21336, 21607, 21876, 22146, 22415, 22683, 22951, 23219, 23486, 23753,
    24019, 24285, 24550, 24815, 25080, 25343, 25607, 25870, 26132, 26394, 26656, 26917, 27177,
    27437, 27697, 27956, 28214, 28472, 28729, 28986, 29242, 29498, 29753, 30007, 30261, 30515,
    30767, 31019, 31271, 31522, 31772, 32022, 32271, 32520, 32768, 33015, 33262, 33508, 33754,
    33998, 34242, 34486, 34729, 34971, 35212, 35453, 35693, 35933, 36172, 36410, 36647, 36884,
    37120, 37355, 37590, 37824, 38057, 38289, 38521, 38752, 38982, 39212, 39441, 39669, 39896,
    40122, 40348, 40573, 40797, 41021, 41243, 41465, 41686, 41906, 42126, 42344, 42562, 42779,
    42995, 43211, 43425, 43639, 43852, 44064, 44275, 44486, 44695, 44904, 45112, 45319, 45525,
    45730, 45935, 46138, 46341, 46543, 46744, 46944, 47143, 47341, 47538, 47735, 47930, 48125,
    48318, 48511, 48703, 48894, 49084, 49273, 49461, 49648, 49834, 50019, 50203, 50387, 50569,
    50751, 50931, 51111, 51289, 51467, 51643, 51819, 51993, 52167, 52339, 52511, 52682, 52851,
    53020, 53187, 53354, 53519, 53684, 53847, 54010, 54171, 54332, 54491, 54650, 54807, 54963,
    55118, 55273, 55426, 55578, 55729, 55879, 56028, 56175, 56322, 56468, 56612, 56756, 56898,
    57040, 57180, 57319, 57457, 57594, 57730, 57865, 57999, 58131, 58263, 58393, 58522, 58650,
    58777, 58903, 59028, 59152, 59274, 59396, 59516, 59635, 59753, 59870, 59986, 60100, 60214,
    60326, 60437, 60547, 60656, 60764, 60870, 60976, 61080, 61183, 61285, 61386, 61485, 61584,
    61681, 61777, 61872, 61966, 62058, 62149, 62239, 62328, 62416, 62503, 62588, 62672, 62755,
    62837, 62918, 62997, 63075, 63152, 63228, 63303, 63376, 63449, 63520, 63589, 63658, 63725,
    63791, 63856, 63920, 63983, 64044, 64104, 64163, 64220, 64277, 64332, 64386, 64439, 64490,
    64540, 64589, 64637, 64684, 64729, 64773, 64816, 64858, 64898, 64937, 64975, 65012, 65048,
    65082, 65115, 65146, 65177, 65206, 65234, 65261, 65287, 65311, 65334, 65356, 65376, 65396,
    65414, 65431, 65446, 65461, 65474, 65485, 65496, 65505, 65514, 65520, 65526, 65530, 65534,
    65535, 65536,
];
