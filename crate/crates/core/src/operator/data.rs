// Boundary closures as tabulated (6 significant digits).
// Entries are Q̄₊ = Q₊ - B/2 for the top-left s×s block; h are the matching H weights.

#[rustfmt::skip]
pub(crate) const DRP4_Q: [[&str; 4]; 4] = [
    ["-0.0371647", "0.690309", "-0.176330", "0.0231858"],
    ["-0.523249", "-0.290858", "1.09105", "-0.274169"],
    ["0.0651977", "-0.431581", "-0.677496", "1.30638"],
    ["-0.00478431", "0.0321293", "-0.133060", "-1.03178"],
];
pub(crate) const DRP4_H: [&str; 4] = ["0.407206", "1.05763", "1.07979", "0.955377"];

#[rustfmt::skip]
pub(crate) const DRP5_Q: [[&str; 6]; 6] = [
    ["-0.0180780", "0.718170", "-0.182502", "-0.0120891", "-0.0286837", "0.0231832"],
    ["-0.673508", "-0.0323215", "0.704725", "-0.0288675", "0.0564717", "-0.0264995"],
    ["0.229024", "-0.746702", "-0.0528860", "0.773477", "-0.184003", "-0.0136722"],
    ["-0.0338854", "0.0960408", "-0.664280", "-0.184729", "0.982364", "-0.279796"],
    ["-0.0167986", "-0.0296235", "0.212984", "-0.506050", "-0.643824", "1.37617"],
    ["0.0132463", "-0.00556370", "-0.0180414", "-0.0665032", "-0.103277", "-0.903194"],
];
pub(crate) const DRP5_H: [&str; 6] = ["0.318079", "1.38392", "0.632156", "1.24425", "0.905649", "1.01595"];

#[rustfmt::skip]
pub(crate) const DRP6_Q: [[&str; 8]; 8] = [
    ["-0.00903009", "0.710170", "-0.103201", "-0.149256", "-0.00889415", "0.0775492", "-0.00762020", "-0.00971753"],
    ["-0.678377", "-0.0306467", "0.383435", "0.382131", "0.144309", "-0.260057", "0.0457140", "0.0134917"],
    ["0.109170", "-0.384446", "-0.0114785", "0.597174", "-0.372833", "-0.00555940", "0.0897052", "-0.0217330"],
    ["0.145873", "-0.369601", "-0.597113", "-0.0223665", "0.509298", "0.736223", "-0.541190", "0.143639"],
    ["-0.0410135", "-0.0712000", "0.413473", "-0.467929", "-0.150629", "0.0494434", "0.470024", "-0.208439"],
    ["-0.0648459", "0.227413", "0.00266513", "-0.704684", "0.160351", "-0.339735", "0.894812", "-0.260975"],
    ["0.0512884", "-0.0996057", "-0.127011", "0.476373", "-0.448256", "-0.0480874", "-0.833357", "1.43699"],
    ["-0.0130649", "0.0179173", "0.0392310", "-0.111443", "0.172608", "-0.251125", "-0.0330888", "-0.901590"],
];
pub(crate) const DRP6_H: [&str; 8] = ["0.294425", "1.52829", "0.251092", "1.80762", "0.403131", "1.28497", "0.920654", "1.00981"];

#[rustfmt::skip]
pub(crate) const DRP7_Q: [[&str; 8]; 8] = [
    ["-0.0193844", "0.527413", "0.139639", "-0.0692289", "-0.100920", "-0.0922254", "0.166400", "-0.0516932"],
    ["-0.452394", "-0.0840763", "0.279856", "0.238695", "0.145656", "0.0215770", "-0.266993", "0.117679"],
    ["-0.136908", "-0.231101", "-0.0701924", "0.139172", "0.200984", "0.229620", "-0.117601", "-0.0139733"],
    ["0.0386701", "-0.191651", "-0.0720692", "-0.0719367", "0.0987782", "0.177441", "0.0955684", "-0.0768901"],
    ["0.0523818", "-0.0839791", "-0.136216", "-0.0635566", "-0.175482", "0.248986", "0.193487", "-0.00776149"],
    ["0.0827498", "-0.0295226", "-0.211359", "-0.156916", "0.0688144", "-0.530310", "0.931838", "-0.301346"],
    ["-0.0719838", "0.149688", "0.00864436", "-0.0685704", "-0.303084", "0.326010", "-1.02574", "1.42660"],
    ["0.00686850", "-0.0567702", "0.0616977", "0.0523413", "0.0713473", "-0.416322", "0.0751616", "-0.840256"],
];
pub(crate) const DRP7_H: [&str; 8] = ["0.370747", "1.10403", "1.19465", "0.782612", "0.881724", "1.32497", "0.798505", "1.04278"];
