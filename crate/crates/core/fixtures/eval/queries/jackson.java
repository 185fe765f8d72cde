import com.fasterxml.jackson.databind.ObjectMapper;

public class UserReader {

    public User read(String json) throws Exception {
        ObjectMapper mapper = new ObjectMapper();
        return mapper.readValue(json, User.class);
    }
}
