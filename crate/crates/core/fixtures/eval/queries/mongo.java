import com.mongodb.client.MongoClient;
import com.mongodb.client.MongoClients;
import com.mongodb.client.MongoCollection;
import com.mongodb.client.MongoDatabase;
import org.bson.Document;

public class OrderStore {

    public void save(String item) {
        MongoClient client = MongoClients.create("mongodb://localhost");
        MongoDatabase database = client.getDatabase("shop");
        MongoCollection<Document> orders = database.getCollection("orders");
        orders.insertOne(new Document("item", item));
    }
}
