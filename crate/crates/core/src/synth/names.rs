// Bundled name and locality lists for the synthetic population.

pub const MALE_GIVEN: &[&str] = &[
    "Aarav", "Abhay", "Abhishek", "Aditya", "Ajay", "Akash", "Alok", "Aman", "Amit", "Anand",
    "Anil", "Ankit", "Anuj", "Arjun", "Arun", "Ashok", "Ashwin", "Bharat", "Chandan", "Deepak",
    "Dev", "Dhruv", "Dinesh", "Gaurav", "Girish", "Gopal", "Harish", "Harsh", "Hemant", "Inder",
    "Ishaan", "Jagdish", "Jatin", "Jitendra", "Kabir", "Kailash", "Kamal", "Karan", "Kishore",
    "Krishna", "Kunal", "Lalit", "Lokesh", "Madhav", "Mahesh", "Manish", "Manoj", "Mayank",
    "Mohan", "Mukesh", "Naveen", "Nikhil", "Nitin", "Om", "Pankaj", "Paras", "Pawan", "Pradeep",
    "Prakash", "Pranav", "Prem", "Rahul", "Rajesh", "Rakesh", "Ram", "Ramesh", "Ravi", "Rohan",
    "Rohit", "Sachin", "Sahil", "Sameer", "Sandeep", "Sanjay", "Satish", "Shankar", "Shiv",
    "Shyam", "Siddharth", "Sonu", "Sudhir", "Sumit", "Sunil", "Suresh", "Tarun", "Tushar",
    "Uday", "Umesh", "Varun", "Vijay", "Vikas", "Vikram", "Vinay", "Vinod", "Vipin", "Vishal",
    "Vivek", "Yash", "Yogesh", "Zubin",
];

pub const FEMALE_GIVEN: &[&str] = &[
    "Aarti", "Aditi", "Aisha", "Alka", "Amrita", "Anita", "Anjali", "Ankita", "Anu", "Aparna",
    "Archana", "Asha", "Bhavna", "Chitra", "Deepa", "Deepika", "Divya", "Ekta", "Gauri", "Geeta",
    "Hema", "Indu", "Isha", "Jaya", "Jyoti", "Kajal", "Kalpana", "Kamla", "Kavita", "Kiran",
    "Komal", "Lata", "Leela", "Madhu", "Mamta", "Manju", "Meena", "Megha", "Mona", "Muskan",
    "Nandini", "Neelam", "Neha", "Nidhi", "Nisha", "Pallavi", "Payal", "Pooja", "Poonam",
    "Preeti", "Priya", "Radha", "Rani", "Reena", "Rekha", "Renu", "Ritu", "Rupa", "Sadhna",
    "Sakshi", "Sangeeta", "Sapna", "Sarita", "Savita", "Seema", "Shalini", "Sheetal", "Shikha",
    "Shilpa", "Shobha", "Shruti", "Simran", "Sneha", "Sonia", "Srishti", "Sudha", "Suman",
    "Sunita", "Swati", "Tanvi", "Tara", "Uma", "Usha", "Vandana", "Varsha", "Veena", "Vidya",
    "Vimla", "Yamini", "Zoya", "Bindu", "Charu", "Falguni", "Garima", "Hina", "Ira", "Juhi",
    "Lakshmi", "Malti", "Nupur",
];

pub const SURNAMES: &[&str] = &[
    "Agarwal", "Ahuja", "Arora", "Bansal", "Batra", "Bhalla", "Bhatia", "Bhatt", "Bose",
    "Chadha", "Chauhan", "Chawla", "Chopra", "Das", "Dhawan", "Dixit", "Dubey", "Dutta",
    "Gandhi", "Garg", "Ghosh", "Gill", "Goel", "Goyal", "Grover", "Gupta", "Jain", "Joshi",
    "Kapoor", "Kashyap", "Khanna", "Khurana", "Kohli", "Kumar", "Lal", "Luthra", "Malhotra",
    "Mathur", "Mehra", "Mehta", "Mishra", "Mittal", "Nagpal", "Nair", "Narang", "Negi",
    "Oberoi", "Pandey", "Pathak", "Puri", "Rai", "Rana", "Rastogi", "Rawat", "Reddy", "Sachdev",
    "Saini", "Saxena", "Sehgal", "Sethi", "Shah", "Sharma", "Shukla", "Sinha", "Sodhi", "Soni",
    "Srivastava", "Suri", "Tandon", "Thakur", "Tiwari", "Tripathi", "Tyagi", "Upadhyay", "Vaid",
    "Varma", "Verma", "Vohra", "Wadhwa", "Yadav", "Bedi", "Bhasin", "Dhingra", "Gulati",
    "Handa", "Juneja", "Kalra", "Madan", "Marwah", "Nanda", "Pahwa", "Rathore", "Sabharwal",
    "Talwar", "Uppal", "Walia", "Ahluwalia", "Bajaj", "Chhabra", "Duggal",
];

/// Locality name and postal code. Names are at most two words so that two
/// houses in one locality never reach the default address-match threshold.
pub const LOCALITIES: &[(&str, &str)] = &[
    ("Lajpat Nagar", "110024"),
    ("Karol Bagh", "110005"),
    ("Rajouri Garden", "110027"),
    ("Patel Nagar", "110008"),
    ("Mall Road", "110054"),
    ("Dwarka", "110075"),
    ("Rohini", "110085"),
    ("Pitampura", "110034"),
    ("Janakpuri", "110058"),
    ("Saket", "110017"),
    ("Malviya Nagar", "110017"),
    ("Vasant Kunj", "110070"),
    ("Mayur Vihar", "110091"),
    ("Preet Vihar", "110092"),
    ("Shahdara", "110032"),
    ("Chandni Chowk", "110006"),
    ("Daryaganj", "110002"),
    ("Paharganj", "110055"),
    ("Connaught Place", "110001"),
    ("Kalkaji", "110019"),
    ("Govindpuri", "110019"),
    ("Greater Kailash", "110048"),
    ("Hauz Khas", "110016"),
    ("Green Park", "110016"),
    ("Munirka", "110067"),
    ("Okhla", "110020"),
    ("Jamia Nagar", "110025"),
    ("Sarita Vihar", "110076"),
    ("Badarpur", "110044"),
    ("Tughlakabad", "110044"),
    ("Model Town", "110009"),
    ("Mukherjee Nagar", "110009"),
    ("Shalimar Bagh", "110088"),
    ("Ashok Vihar", "110052"),
    ("Wazirpur", "110052"),
    ("Narela", "110040"),
    ("Bawana", "110039"),
    ("Najafgarh", "110043"),
    ("Uttam Nagar", "110059"),
    ("Vikaspuri", "110018"),
    ("Tilak Nagar", "110018"),
    ("Moti Nagar", "110015"),
    ("Kirti Nagar", "110015"),
    ("Laxmi Nagar", "110092"),
    ("Gandhi Nagar", "110031"),
    ("Krishna Nagar", "110051"),
    ("Seelampur", "110053"),
    ("Burari", "110084"),
    ("Station Road", "110006"),
    ("Park Street", "110001"),
];

pub const VEHICLE_CLASSES: &[&str] = &["LMV", "MCWG", "LMV,MCWG", "LMV-NT", "MCWOG"];
